#include <doctest.h>
TEST_SUITE_BEGIN("master");
TEST_SUITE_END();
