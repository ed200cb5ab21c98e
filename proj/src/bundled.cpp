#include "nilgeo/bundled.hpp"

#include <cstdlib>

namespace nilgeo {

namespace {

struct Entry {
  int i, j, k;
  int coeff;
};

ExactAlgebra build(int n, const std::vector<Entry>& entries, const MatQ& gram,
                   std::vector<std::string> labels) {
  std::vector<ExactAlgebra::Bracket> brackets;
  for (const auto& e : entries) {
    VecQ v = VecQ::Zero(n);
    v[e.k] = e.coeff;
    brackets.push_back({e.i, e.j, v});
  }
  return ExactAlgebra(n, std::move(brackets), gram, std::move(labels));
}

MatQ diagonal(const std::vector<int>& d) {
  const int n = static_cast<int>(d.size());
  MatQ g = MatQ::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = d[i];
  return g;
}

int parse_sign(char c) {
  if (c == '+') return 1;
  if (c == '-') return -1;
  throw Error(ErrorCode::InvalidArgument, std::string("bad sign character '") + c + "'");
}

}  // namespace

ExactAlgebra heisenberg3(int s1, int s2, int sz) {
  return build(3, {{0, 1, 2, 1}}, diagonal({s1, s2, sz}), {"e1", "e2", "z"});
}

ExactAlgebra heisenberg3_null_center() {
  MatQ g = MatQ::Zero(3, 3);
  g(0, 1) = g(1, 0) = 1;
  g(2, 2) = 1;
  return build(3, {{2, 1, 0, 1}}, g, {"u", "v", "e"});
}

ExactAlgebra quaternionic7(int eps, int ebar1, int ebar2) {
  enum { u1, u2, z, v1, v2, e1, e2 };
  MatQ g = MatQ::Zero(7, 7);
  g(u1, v1) = g(v1, u1) = 1;
  g(u2, v2) = g(v2, u2) = 1;
  g(z, z) = eps;
  g(e1, e1) = ebar1;
  g(e2, e2) = ebar2;
  return build(7,
               {{e1, e2, z, 1},
                {v1, v2, z, 1},
                {e1, v1, u1, 1},
                {e2, v1, u2, 1},
                {e1, v2, u2, 1},
                {e2, v2, u1, -1}},
               g, {"u1", "u2", "z", "v1", "v2", "e1", "e2"});
}

ExactAlgebra flat_u_group() {
  enum { u1, u2, z, v1, v2 };
  MatQ g = MatQ::Zero(5, 5);
  g(u1, v1) = g(v1, u1) = 1;
  g(u2, v2) = g(v2, u2) = 1;
  g(z, z) = 1;
  return build(5, {{v1, v2, u1, 1}}, g, {"u1", "u2", "z", "v1", "v2"});
}

ExactAlgebra abelian(int n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "abelian algebra needs positive dimension");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
  return ExactAlgebra(n, {}, MatQ::Identity(n, n), labels);
}

ExactAlgebra complex_heisenberg6() {
  enum { x1, x2, y1, y2, z1, z2 };
  return build(6,
               {{x1, y1, z1, 1}, {x2, y2, z1, -1}, {x1, y2, z2, 1}, {x2, y1, z2, 1}},
               diagonal({1, 1, 1, 1, 1, -1}), {"x1", "x2", "y1", "y2", "z1", "z2"});
}

std::vector<std::string> bundled_names() {
  std::vector<std::string> names = {"heisenberg3-riemannian", "heisenberg3-lorentzian",
                                    "heisenberg3-lorentzian-spacelike-center", "heisenberg3-null-center"};
  for (const char* s : {"+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"})
    names.push_back(std::string("quaternionic7:") + s);
  names.push_back("flat-u-group");
  names.push_back("abelian-3");
  names.push_back("complex-heisenberg6");
  return names;
}

MetricAlgebra bundled_algebra(const std::string& name) {
  auto exact = [](ExactAlgebra a) { return MetricAlgebra(std::move(a), Mode::Exact); };
  if (name == "heisenberg3-riemannian" || name == "heisenberg3") return exact(heisenberg3(1, 1, 1));
  if (name == "heisenberg3-lorentzian") return exact(heisenberg3(1, -1, 1));
  if (name == "heisenberg3-lorentzian-spacelike-center") return exact(heisenberg3(1, 1, -1));
  if (name == "heisenberg3-null-center") return exact(heisenberg3_null_center());
  if (name == "quaternionic7") return exact(quaternionic7(1, 1, 1));
  const std::string q = "quaternionic7:";
  if (name.rfind(q, 0) == 0 && name.size() == q.size() + 3)
    return exact(quaternionic7(parse_sign(name[q.size()]), parse_sign(name[q.size() + 1]),
                               parse_sign(name[q.size() + 2])));
  if (name == "flat-u-group") return exact(flat_u_group());
  if (name == "complex-heisenberg6") return exact(complex_heisenberg6());
  const std::string ab = "abelian-";
  if (name.rfind(ab, 0) == 0) {
    char* end = nullptr;
    long n = std::strtol(name.c_str() + ab.size(), &end, 10);
    if (*end == '\0' && n > 0 && n <= 64) return exact(abelian(static_cast<int>(n)));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown bundled algebra '" + name + "'");
}

}  // namespace nilgeo
