#include "nilgeo/io.hpp"

#include <cmath>

namespace nilgeo {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema("expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) schema(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Json mode_name(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

Json real_to_json(Real x) { return static_cast<double>(x); }

Json matrix_columns(const MatQ& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Rational rational_from_json(const Json& j, bool* inexact) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) {
    double x = j.get<double>();
    if (!std::isfinite(x)) schema("non-finite number");
    if (x != std::floor(x) && inexact) *inexact = true;
    return exact_from_double(x);
  }
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error&) {
      schema("bad rational '" + j.get<std::string>() + "'");
    }
  }
  schema("expected a number or a \"p/q\" string");
}

Json rational_to_json(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) {
    auto n = boost::multiprecision::numerator(q);
    if (abs(n) < (boost::multiprecision::mpz_int(1) << 53)) return n.convert_to<long long>();
  }
  return to_string(q);
}

VecQ vector_from_json(const Json& j, int dim, bool* inexact) {
  if (!j.is_array()) schema("expected an array");
  if (dim >= 0 && static_cast<int>(j.size()) != dim)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
  VecQ v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = rational_from_json(j[k], inexact);
  return v;
}

Json vector_to_json(const VecQ& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(rational_to_json(v[k]));
  return out;
}

Json real_vector_to_json(const Vec<Real>& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(real_to_json(v[k]));
  return out;
}

MetricAlgebra algebra_from_json(const Json& j) {
  const int n = int_field(j, "dim");
  if (n <= 0) schema("dim must be positive");
  bool inexact = false;
  std::vector<ExactAlgebra::Bracket> brackets;
  const Json& bs = field(j, "brackets");
  if (!bs.is_array()) schema("brackets must be an array");
  for (const auto& b : bs) {
    if (!b.is_array() || b.size() != 3 || !b[0].is_number_integer() || !b[1].is_number_integer())
      schema("each bracket is [i, j, [coefficients]]");
    brackets.push_back({b[0].get<int>(), b[1].get<int>(), vector_from_json(b[2], n, &inexact)});
  }
  const Json& g = field(j, "gram");
  if (!g.is_array() || static_cast<int>(g.size()) != n) schema("gram must have dim rows");
  MatQ gram(n, n);
  for (int r = 0; r < n; ++r) gram.row(r) = vector_from_json(g[r], n, &inexact).transpose();
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) schema("labels must be an array of strings");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) schema("labels must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  Mode mode = inexact ? Mode::Float : Mode::Exact;
  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (m == "exact")
      mode = Mode::Exact;
    else if (m == "float")
      mode = Mode::Float;
    else
      schema("mode must be \"exact\" or \"float\"");
  }
  return MetricAlgebra(ExactAlgebra(n, std::move(brackets), gram, std::move(labels)), mode);
}

Json algebra_to_json(const MetricAlgebra& alg) {
  const ExactAlgebra& a = alg.exact();
  const bool fl = alg.mode() == Mode::Float;
  auto scalar = [&](const Rational& q) -> Json { return fl ? Json(to_double(q)) : rational_to_json(q); };
  auto vec = [&](const VecQ& v) {
    Json out = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(scalar(v[k]));
    return out;
  };
  Json j;
  j["dim"] = a.dim();
  j["mode"] = mode_name(alg.mode());
  j["brackets"] = Json::array();
  for (const auto& b : a.brackets()) j["brackets"].push_back(Json::array({b.i, b.j, vec(b.value)}));
  j["gram"] = Json::array();
  for (int r = 0; r < a.dim(); ++r) j["gram"].push_back(vec(a.gram().row(r).transpose()));
  if (!a.labels().empty()) j["labels"] = a.labels();
  return j;
}

Json validation_to_json(const ValidationReport& r) {
  return {{"ok", r.ok()},
          {"antisymmetric", r.antisymmetric},
          {"jacobi", r.jacobi},
          {"two_step", r.two_step},
          {"abelian", r.abelian},
          {"gram_symmetric", r.gram_symmetric},
          {"gram_nondegenerate", r.gram_nondegenerate},
          {"rational", r.rational},
          {"failures", r.failures}};
}

Json frame_to_json(const ExactAlgebra& alg, const WittFrame& f) {
  Json j;
  j["dims"] = {{"U", f.du}, {"Z", f.dz}, {"V", f.dv}, {"E", f.de}};
  j["U"] = matrix_columns(f.vectors(Part::U));
  j["Z"] = matrix_columns(f.vectors(Part::Z));
  j["V"] = matrix_columns(f.vectors(Part::V));
  j["E"] = matrix_columns(f.vectors(Part::E));
  j["z_norms"] = vector_to_json(f.z_norms);
  j["e_norms"] = vector_to_json(f.e_norms);
  j["z_signature"] = f.z_signs();
  j["e_signature"] = f.e_signs();
  j["nondegenerate_center"] = f.du == 0;
  std::vector<std::string> issues = check_frame(alg, f);
  j["checks_passed"] = issues.empty();
  j["issues"] = issues;
  return j;
}

Json curvature_table_to_json(const ExactAlgebra& alg, const WittFrame& f, const std::vector<CurvatureRow>& rows,
                             bool adapted) {
  std::vector<std::string> names;
  if (adapted) {
    for (int k = 0; k < f.du; ++k) names.push_back("u" + std::to_string(k + 1));
    for (int k = 0; k < f.dz; ++k) names.push_back("z" + std::to_string(k + 1));
    for (int k = 0; k < f.dv; ++k) names.push_back("v" + std::to_string(k + 1));
    for (int k = 0; k < f.de; ++k) names.push_back("e" + std::to_string(k + 1));
  } else {
    for (int k = 0; k < alg.dim(); ++k)
      names.push_back(alg.labels().empty() ? "b" + std::to_string(k + 1) : alg.labels()[k]);
  }
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = {{"i", r.i},
                {"j", r.j},
                {"x", names[r.i]},
                {"y", names[r.j]},
                {"numerator", rational_to_json(r.numerator)},
                {"denominator", rational_to_json(r.denominator)},
                {"homaloidal", r.homaloidal}};
    if (r.sectional) {
      row["sectional"] = rational_to_json(*r.sectional);
      row["sectional_value"] = to_double(*r.sectional);
    } else {
      row["sectional"] = nullptr;
      row["sectional_value"] = nullptr;
    }
    out.push_back(row);
  }
  return {{"basis", adapted ? "adapted" : "ambient"}, {"rows", out}};
}

GeodesicIvp ivp_from_json(const GeodesicContext& ctx, const Json& j) {
  const int n = ctx.dim();
  auto real_vec = [&](const Json& v) { return to_real<Real>(vector_from_json(v, n)); };
  std::string coords = "ambient";
  if (j.contains("coords")) {
    if (!j["coords"].is_string()) schema("coords must be a string");
    coords = j["coords"].get<std::string>();
    if (coords != "ambient" && coords != "adapted") schema("coords must be \"ambient\" or \"adapted\"");
  }
  if (!j.contains("velocity") && (j.contains("u0") || j.contains("z0") || j.contains("v0") || j.contains("e0"))) {
    // block form, always adapted
    const RealFrame& f = ctx.frame();
    Vec<Real> vel = Vec<Real>::Zero(n);
    const std::pair<const char*, Part> blocks[] = {{"u0", Part::U}, {"z0", Part::Z}, {"v0", Part::V}, {"e0", Part::E}};
    for (const auto& [key, part] : blocks) {
      if (!j.contains(key)) continue;
      VecQ b = vector_from_json(j[key], f.size(part));
      vel.segment(f.offset(part), f.size(part)) = to_real<Real>(b);
    }
    Vec<Real> base = j.contains("base") ? real_vec(j["base"]) : Vec<Real>(Vec<Real>::Zero(n));
    if (coords == "ambient") base = ctx.to_adapted(base);
    return ctx.make_ivp(vel, base);
  }
  Vec<Real> vel = real_vec(field(j, "velocity"));
  Vec<Real> base = j.contains("base") ? real_vec(j["base"]) : Vec<Real>(Vec<Real>::Zero(n));
  if (coords == "ambient") {
    vel = ctx.to_adapted(vel);
    base = ctx.to_adapted(base);
  }
  return ctx.make_ivp(vel, base);
}

Json ivp_to_json(const GeodesicContext& ctx, const GeodesicIvp& ivp) {
  return {{"coords", "ambient"},
          {"velocity", real_vector_to_json(ctx.to_ambient(ivp.velocity()))},
          {"base", real_vector_to_json(ctx.to_ambient(ivp.base))}};
}

Json state_to_json(const GeodesicContext& ctx, const GeodesicState& s) {
  return {{"t", real_to_json(s.t)},
          {"position", real_vector_to_json(ctx.to_ambient(s.position))},
          {"velocity", real_vector_to_json(ctx.to_ambient(s.velocity))},
          {"body", real_vector_to_json(ctx.to_ambient(s.body))}};
}

LatticeSpec lattice_from_json(const MetricAlgebra& alg, const Json& j) {
  const Json& gs = field(j, "generators");
  if (!gs.is_array()) schema("generators must be an array");
  std::vector<VecQ> logs;
  for (const auto& g : gs) {
    bool inexact = false;
    logs.push_back(vector_from_json(g, alg.dim(), &inexact));
    if (inexact) throw Error(ErrorCode::NonRationalStructure, "generator logs must be rational");
  }
  return build_lattice(alg, logs);
}

Json lattice_to_json(const LatticeSpec& l) {
  Json gens = Json::array();
  for (const auto& g : l.generators) gens.push_back(vector_to_json(g.log));
  return {{"generators", gens},
          {"central_generators", l.central},
          {"central_lattice", matrix_columns(l.central_lattice)},
          {"projected_lattice", matrix_columns(l.projected_lattice)}};
}

Json torus_to_json(const TorusData& t) {
  return {{"dim_fiber", t.dim_fiber},
          {"dim_base", t.dim_base},
          {"central_lattice", matrix_columns(t.central_lattice)},
          {"projected_lattice", matrix_columns(t.projected_lattice)},
          {"fiber_flat", t.fiber_flat},
          {"base_flat", t.base_flat},
          {"nondegenerate_center", t.nondegenerate_center}};
}

Json torus_spectrum_to_json(const TorusSpectrum& s) {
  Json sq = Json::array();
  for (const auto& q : s.squared) sq.push_back(rational_to_json(q));
  return {{"squared", sq}, {"periods", s.periods}, {"null_count", s.null_count}};
}

Json record_to_json(const PeriodRecord& r) {
  return {{"omega", r.omega},
          {"omega_sq", rational_to_json(r.omega_sq)},
          {"phi", vector_to_json(r.phi.log)},
          {"exponents", r.exponents},
          {"causal", causal_name(r.causal)},
          {"distinguished", r.distinguished},
          {"central", r.central},
          {"class_key", vector_to_json(r.class_key)}};
}

Json spectrum_to_json(const PeriodSpectrum& s) {
  Json recs = Json::array();
  for (const auto& r : s.records) recs.push_back(record_to_json(r));
  return {{"bound", s.bound},
          {"records", recs},
          {"null_count", s.null_count},
          {"non_translating", s.non_translating},
          {"complete_up_to_bound", true}};
}

}  // namespace nilgeo
