// placeholder — implementation follows
