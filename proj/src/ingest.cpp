#include "fvrptw/ingest.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fvrptw {

namespace {

bool parse_fields(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (...) {
      return false;
    }
    if (pos != tok.size()) return false;
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace

RawSolomonInstance parse_solomon(std::istream& in) {
  RawSolomonInstance raw;
  std::string line;
  int lineno = 0;
  bool saw_name = false;
  std::vector<double> f;
  auto starts_numeric = [](const std::string& tok) {
    return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-' ||
                            tok[0] == '+' || tok[0] == '.');
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;  // blank line
    if (!saw_name) {
      // The first non-blank token line is the instance name.
      raw.name = first;
      saw_name = true;
      continue;
    }
    if (!starts_numeric(first)) continue;  // section header or column captions
    if (!parse_fields(line, f))
      throw std::runtime_error("parse_solomon: line " + std::to_string(lineno) +
                               ": malformed numeric field");
    if (raw.nodes.empty() && f.size() == 2) {
      // The VEHICLE section's "number capacity" row.
      raw.file_vehicles = static_cast<int>(f[0]);
      raw.file_capacity = static_cast<int>(f[1]);
      continue;
    }
    if (f.size() != 7)
      throw std::runtime_error("parse_solomon: line " + std::to_string(lineno) +
                               ": expected 7 numeric fields, got " + std::to_string(f.size()));
    SolomonNode node;
    node.id = static_cast<int>(f[0]);
    node.x = f[1];
    node.y = f[2];
    node.demand = static_cast<int>(f[3]);
    node.ready = static_cast<int>(f[4]);
    node.due = static_cast<int>(f[5]);
    node.service = static_cast<int>(f[6]);
    raw.nodes.push_back(node);
  }
  if (raw.nodes.empty()) throw std::runtime_error("parse_solomon: no node records found");
  if (raw.nodes.front().demand != 0)
    throw std::runtime_error("parse_solomon: first record must be the depot (demand 0)");
  return raw;
}

RawSolomonInstance parse_solomon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return parse_solomon(in);
}

Instance derive_instance(const RawSolomonInstance& raw, const DerivationSpec& spec,
                         Rounding rounding) {
  if (spec.k < 1 || spec.Q < spec.k || spec.Q % spec.k != 0)
    throw std::invalid_argument("derive_instance: Q must be a positive multiple of k");
  if (spec.rho_pct != 25 && spec.rho_pct != 50 && spec.rho_pct != 75)
    throw std::invalid_argument("derive_instance: rho must be 25, 50 or 75");
  if (spec.n < 1 || spec.n > static_cast<int>(raw.nodes.size()) - 1)
    throw std::invalid_argument("derive_instance: n exceeds available customers");

  Instance inst;
  inst.name = raw.name;
  inst.n = spec.n;
  inst.Q = spec.Q;
  inst.k = spec.k;
  inst.m = spec.Q / spec.k;
  inst.rho_pct = spec.rho_pct;
  const int N = spec.n + 2;
  inst.coords.resize(N);
  inst.demand.resize(N);
  inst.tw_lo.resize(N);
  inst.tw_hi.resize(N);
  inst.service.resize(N);
  inst.fragile.assign(N, 0);

  auto fill = [&](int idx, const SolomonNode& node) {
    inst.coords[idx] = {node.x, node.y};
    inst.demand[idx] = node.demand;
    inst.tw_lo[idx] = static_cast<deci>(node.ready) * 10;
    inst.tw_hi[idx] = static_cast<deci>(node.due) * 10;
    inst.service[idx] = static_cast<deci>(node.service) * 10;
  };
  fill(0, raw.nodes[0]);
  for (int i = 1; i <= spec.n; ++i) fill(i, raw.nodes[i]);
  fill(spec.n + 1, raw.nodes[0]);
  inst.demand[0] = inst.demand[spec.n + 1] = 0;

  // Non-fragile assignment by customer number (1-based, Solomon order).
  for (int i = 1; i <= spec.n; ++i) {
    bool nonfragile;
    switch (spec.rho_pct) {
      case 50: nonfragile = (i % 2 == 0); break;
      case 25: nonfragile = (i % 4 == 1); break;   // numbers 4i-3
      default: nonfragile = (i % 4 != 3); break;   // 75%: numbers 4i-1 fragile
    }
    inst.fragile[i] = nonfragile ? 0 : 1;
  }

  build_matrices(inst, rounding);
  inst.validate();
  return inst;
}

void build_matrices(Instance& inst, Rounding rounding) {
  const int N = inst.nodes();
  inst.cost_mat.assign(N * N, 0);
  inst.time_mat.assign(N * N, 0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double dx = inst.coords[i].x - inst.coords[j].x;
      double dy = inst.coords[i].y - inst.coords[j].y;
      double d10 = 10.0 * std::sqrt(dx * dx + dy * dy);
      deci c;
      if (rounding == Rounding::Truncate)
        c = static_cast<deci>(std::floor(d10 + 1e-9));  // guard exact values
      else
        c = static_cast<deci>(std::floor(d10 + 0.5));
      inst.cost_mat[i * N + j] = c;
      inst.time_mat[i * N + j] = c + inst.service[i];
    }
}

int ArcSet::count() const {
  int total = 0;
  for (char a : allowed) total += a;
  return total;
}

ArcSet preprocess_arcs(const Instance& inst) {
  ArcSet set;
  const int N = inst.nodes();
  set.n = inst.n;
  set.allowed.assign(N * N, 0);
  set.out.resize(N);
  set.in.resize(N);
  auto add = [&](int i, int j) {
    set.allowed[i * N + j] = 1;
    set.out[i].push_back(j);
    set.in[j].push_back(i);
  };
  for (int j = 1; j <= inst.n; ++j) add(0, j);
  for (int i = 1; i <= inst.n; ++i) add(i, inst.sink());
  for (int i = 1; i <= inst.n; ++i)
    for (int j = 1; j <= inst.n; ++j) {
      if (i == j) continue;
      if (inst.demand[i] + inst.demand[j] > inst.Q) continue;
      if (inst.tw_lo[i] + inst.t(i, j) > inst.tw_hi[j]) continue;
      add(i, j);
    }
  return set;
}

}  // namespace fvrptw
