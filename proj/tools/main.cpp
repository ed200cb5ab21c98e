#include "nilgeo/nilgeo.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using Json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kValidation = 2, kBreach = 3, kInput = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_for(nilgeo_status s) {
  switch (s) {
    case NILGEO_ERR_INVALID_ALGEBRA:
    case NILGEO_ERR_SINGULAR_GRAM:
      return kValidation;
    case NILGEO_ERR_STEP_SIZE_UNDERFLOW:
      return kBreach;
    default:
      return kInput;
  }
}

void check(nilgeo_status s, const std::string& context) {
  if (s == NILGEO_OK) return;
  throw Failure{exit_for(s), context + ": " + nilgeo_last_error()};
}

// takes ownership of a string returned by the library
Json take_json(char* text) {
  std::unique_ptr<char, decltype(&nilgeo_string_free)> owned(text, nilgeo_string_free);
  return Json::parse(owned.get());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInput, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct AlgebraDeleter {
  void operator()(nilgeo_algebra* a) const { nilgeo_algebra_free(a); }
};
struct LatticeDeleter {
  void operator()(nilgeo_lattice* l) const { nilgeo_lattice_free(l); }
};
using AlgebraPtr = std::unique_ptr<nilgeo_algebra, AlgebraDeleter>;
using LatticePtr = std::unique_ptr<nilgeo_lattice, LatticeDeleter>;

struct Config {
  std::string algebra_file;
  std::string bundled;
  std::string mode;
  std::string format = "json";
  std::string output;
  nilgeo_options opt{};
  // curvature
  bool ambient = false;
  // geodesic
  std::string ivp_file;
  std::string ivp_text;
  std::vector<double> times;
  double t_end = 10;
  int samples = 11;
  bool compare_oracle = false;
  // spectrum
  std::string lattice_file;
  int bound = 2;
  bool flat_case = false;
  bool torus = false;
  bool partition = false;
  // compare
  int ivps = 100;
};

AlgebraPtr load_algebra(const Config& c) {
  nilgeo_algebra* raw = nullptr;
  if (!c.bundled.empty()) {
    check(nilgeo_algebra_bundled(c.bundled.c_str(), &raw), "bundled algebra " + c.bundled);
    AlgebraPtr alg(raw);
    if (c.mode.empty()) return alg;
    // rewrite through JSON so the mode override applies uniformly
    Json j = take_json([&] {
      char* s = nullptr;
      check(nilgeo_algebra_to_json(alg.get(), &s), "serializing " + c.bundled);
      return s;
    }());
    j["mode"] = c.mode;
    raw = nullptr;
    check(nilgeo_algebra_from_json(j.dump().c_str(), &raw), "bundled algebra " + c.bundled);
    return AlgebraPtr(raw);
  }
  std::string text = read_file(c.algebra_file);
  if (!c.mode.empty()) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw Failure{kInput, c.algebra_file + ": " + e.what()};
    }
    if (j.is_object()) j["mode"] = c.mode;
    text = j.dump();
  }
  check(nilgeo_algebra_from_json(text.c_str(), &raw), c.algebra_file);
  return AlgebraPtr(raw);
}

std::string source_name(const Config& c) { return c.bundled.empty() ? c.algebra_file : c.bundled; }

// every subcommand works on a validated algebra
Json require_valid(const nilgeo_algebra* alg, const Config& c) {
  int ok = 0;
  char* report = nullptr;
  check(nilgeo_validate(alg, &ok, &report), "validating " + source_name(c));
  Json j = take_json(report);
  if (!ok) {
    std::string why;
    for (const auto& f : j["failures"]) why += "\n  " + f.get<std::string>();
    throw Failure{kValidation, source_name(c) + " is not a valid 2-step metric nilpotent algebra" + why};
  }
  return j;
}

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
  out << '\n';
}

void write_output(const Config& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw Failure{kInput, "cannot write " + c.output};
  out << text;
}

std::string decompose_csv(const Json& f) {
  std::ostringstream out;
  write_csv_row(out, {"block", "index", "norm", "vector"});
  for (const char* b : {"U", "Z", "V", "E"}) {
    const Json& cols = f[b];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::string norm;
      if (std::string(b) == "Z") norm = cell(f["z_norms"][k]);
      if (std::string(b) == "E") norm = cell(f["e_norms"][k]);
      std::string vec;
      for (const auto& x : cols[k]) vec += (vec.empty() ? "" : " ") + cell(x);
      write_csv_row(out, {b, std::to_string(k + 1), norm, vec});
    }
  }
  return out.str();
}

std::string curvature_csv(const Json& t) {
  std::ostringstream out;
  write_csv_row(out, {"x", "y", "numerator", "denominator", "sectional", "sectional_value", "homaloidal"});
  for (const auto& r : t["rows"])
    write_csv_row(out, {cell(r["x"]), cell(r["y"]), cell(r["numerator"]), cell(r["denominator"]),
                        cell(r.value("sectional", Json())), cell(r.value("sectional_value", Json())),
                        r["homaloidal"].get<bool>() ? "1" : "0"});
  return out.str();
}

std::string geodesic_csv(const Json& g) {
  std::ostringstream out;
  const std::size_t n = g["states"].empty() ? 0 : g["states"][0]["position"].size();
  std::vector<std::string> head{"t"};
  for (std::size_t i = 0; i < n; ++i) head.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) head.push_back("w" + std::to_string(i + 1));
  const bool oracle = g.contains("oracle");
  if (oracle)
    for (std::size_t i = 0; i < n; ++i) head.push_back("oracle_x" + std::to_string(i + 1));
  write_csv_row(out, head);
  for (std::size_t k = 0; k < g["states"].size(); ++k) {
    const Json& s = g["states"][k];
    std::vector<std::string> row{cell(s["t"])};
    for (const auto& x : s["position"]) row.push_back(cell(x));
    for (const auto& x : s["velocity"]) row.push_back(cell(x));
    if (oracle)
      for (const auto& x : g["oracle"][k]["position"]) row.push_back(cell(x));
    write_csv_row(out, row);
  }
  return out.str();
}

// histogram of the period records by squared period
std::string spectrum_csv(const Json& s) {
  struct Bin {
    double omega = 0;
    int count = 0, central = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Bin> bins;
  for (const auto& r : s["records"]) {
    const std::string key = cell(r["omega_sq"]);
    auto [it, fresh] = bins.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.omega = r["omega"].get<double>();
    ++it->second.count;
    if (r["central"].get<bool>()) ++it->second.central;
  }
  std::ostringstream out;
  out.precision(17);
  write_csv_row(out, {"omega_sq", "omega", "count", "central_count"});
  for (const auto& key : order) {
    const Bin& b = bins[key];
    std::ostringstream om;
    om.precision(17);
    om << b.omega;
    write_csv_row(out, {key, om.str(), std::to_string(b.count), std::to_string(b.central)});
  }
  return out.str();
}

std::string compare_csv(const Json& c) {
  std::ostringstream out;
  std::vector<std::string> head, row;
  for (const char* k : {"ivps", "skipped_degenerate_split", "samples", "t_end", "max_position_deviation",
                        "max_body_deviation", "max_speed_drift", "max_first_integral_drift", "tolerance"}) {
    head.push_back(k);
    row.push_back(cell(c[k]));
  }
  head.push_back("breach");
  row.push_back(c["breach"].get<bool>() ? "1" : "0");
  write_csv_row(out, head);
  write_csv_row(out, row);
  return out.str();
}

std::string validate_csv(const Json& v) {
  std::ostringstream out;
  write_csv_row(out, {"check", "passed"});
  for (const char* k : {"antisymmetric", "jacobi", "two_step", "gram_symmetric", "gram_nondegenerate", "rational"})
    write_csv_row(out, {k, v[k].get<bool>() ? "1" : "0"});
  return out.str();
}

std::string render(const Config& c, const Json& j, std::string (*csv)(const Json&)) {
  if (c.format == "csv") {
    if (!csv) throw Failure{kInput, "no CSV form for this output"};
    return csv(j);
  }
  return j.dump(2) + "\n";
}

std::vector<double> sample_times(const Config& c) {
  if (!c.times.empty()) return c.times;
  std::vector<double> ts;
  for (int k = 0; k < c.samples; ++k) ts.push_back(c.samples == 1 ? 0.0 : c.t_end * k / (c.samples - 1));
  return ts;
}

int run_validate(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  int ok = 0;
  char* report = nullptr;
  check(nilgeo_validate(alg.get(), &ok, &report), "validating " + source_name(c));
  write_output(c, render(c, take_json(report), validate_csv));
  return ok ? kOk : kValidation;
}

int run_decompose(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  require_valid(alg.get(), c);
  char* out = nullptr;
  check(nilgeo_decompose(alg.get(), &out), "decomposing " + source_name(c));
  Json f = take_json(out);
  write_output(c, render(c, f, decompose_csv));
  return f["checks_passed"].get<bool>() ? kOk : kBreach;
}

int run_curvature(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  require_valid(alg.get(), c);
  char* out = nullptr;
  check(nilgeo_curvature(alg.get(), c.ambient ? 0 : 1, &out), "curvature of " + source_name(c));
  write_output(c, render(c, take_json(out), curvature_csv));
  return kOk;
}

int run_geodesic(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  require_valid(alg.get(), c);
  const std::string ivp = c.ivp_text.empty() ? read_file(c.ivp_file) : c.ivp_text;
  const std::vector<double> ts = sample_times(c);
  int breach = 0;
  char* out = nullptr;
  check(nilgeo_geodesic(alg.get(), ivp.c_str(), ts.data(), ts.size(), c.compare_oracle, &c.opt, &breach, &out),
        "geodesic");
  write_output(c, render(c, take_json(out), geodesic_csv));
  return breach ? kBreach : kOk;
}

int run_spectrum(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  require_valid(alg.get(), c);
  nilgeo_lattice* raw = nullptr;
  if (c.lattice_file.empty())
    check(nilgeo_lattice_standard(alg.get(), &raw), "standard lattice");
  else
    check(nilgeo_lattice_from_json(alg.get(), read_file(c.lattice_file).c_str(), &raw), c.lattice_file);
  LatticePtr lat(raw);
  int breach = 0;
  char* out = nullptr;
  check(nilgeo_spectrum(lat.get(), c.bound, c.flat_case, c.partition, &c.opt, &breach, &out), "spectrum");
  Json j = take_json(out);
  if (c.torus) {
    out = nullptr;
    check(nilgeo_torus(lat.get(), c.bound, &out), "torus");
    j["torus"] = take_json(out);
  }
  write_output(c, render(c, j, spectrum_csv));
  return breach ? kBreach : kOk;
}

int run_compare(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  require_valid(alg.get(), c);
  int breach = 0;
  char* out = nullptr;
  check(nilgeo_compare(alg.get(), c.ivps, c.t_end, c.samples, &c.opt, &breach, &out), "compare");
  write_output(c, render(c, take_json(out), compare_csv));
  return breach ? kBreach : kOk;
}

int run_algebra(const Config& c) {
  AlgebraPtr alg = load_algebra(c);
  char* out = nullptr;
  check(nilgeo_algebra_to_json(alg.get(), &out), "serializing " + source_name(c));
  write_output(c, take_json(out).dump(2) + "\n");
  return kOk;
}

int run_list(const Config& c) {
  char* out = nullptr;
  check(nilgeo_bundled_names(&out), "bundled names");
  Json names = take_json(out);
  std::string text;
  for (const auto& n : names) text += n.get<std::string>() + "\n";
  write_output(c, c.format == "json" ? names.dump(2) + "\n" : text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  nilgeo_options_default(&c.opt);

  CLI::App app{"Geometry of 2-step nilpotent Lie groups with indefinite left-invariant metrics"};
  app.require_subcommand(1);

  auto positive = CLI::PositiveNumber;
  auto add_common = [&](CLI::App* sub, bool needs_algebra) {
    if (needs_algebra) {
      auto* f = sub->add_option("--algebra", c.algebra_file, "Algebra JSON file")->check(CLI::ExistingFile);
      auto* b = sub->add_option("--bundled", c.bundled, "Bundled algebra name (see list)");
      f->excludes(b);
      sub->add_option("--mode", c.mode, "Arithmetic: exact or float (default: from the input)")
          ->check(CLI::IsMember({"exact", "float"}));
      sub->callback([&, sub] {
        if (c.algebra_file.empty() && c.bundled.empty())
          throw CLI::RequiredError(sub->get_name() + ": one of --algebra or --bundled");
      });
    }
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
    sub->add_option("--tau-null", c.opt.tau_null, "Null threshold in float mode")->check(positive);
    sub->add_option("--tau-rank", c.opt.tau_rank, "Relative rank cut for ker J")->check(positive);
    sub->add_option("--tau-fix", c.opt.tau_fix, "Translation criterion tolerance")->check(positive);
    sub->add_option("--ode-tol", c.opt.ode_rel_tol, "Oracle integrator tolerance")
        ->check(positive)
        ->each([&](const std::string&) { c.opt.ode_abs_tol = c.opt.ode_rel_tol; });
    sub->add_option("--compare-tol", c.opt.compare_tol, "Agreement tolerance for oracle and direct checks")
        ->check(positive);
    sub->add_option("--seed", c.opt.seed, "Seed for random sweeps");
  };

  auto* validate = app.add_subcommand("validate", "Check the algebra axioms");
  add_common(validate, true);

  auto* decompose = app.add_subcommand("decompose", "Witt-adapted decomposition U+Z+V+E");
  add_common(decompose, true);

  auto* curvature = app.add_subcommand("curvature", "Basis-pair curvature table and flatness flags");
  add_common(curvature, true);
  curvature->add_flag("--ambient", c.ambient, "Use the input basis instead of the adapted one");

  auto* geodesic = app.add_subcommand("geodesic", "Sample the geodesic with the given initial data");
  add_common(geodesic, true);
  auto* ivp_file = geodesic->add_option("--ivp", c.ivp_file, "IVP JSON file")->check(CLI::ExistingFile);
  auto* ivp_text = geodesic->add_option("--ivp-json", c.ivp_text, "IVP JSON given inline");
  ivp_file->excludes(ivp_text);
  geodesic->add_option("--times", c.times, "Comma-separated sample times")->delimiter(',');
  geodesic->add_option("--t-end", c.t_end, "End of the uniform sample grid")->check(CLI::NonNegativeNumber);
  geodesic->add_option("--samples", c.samples, "Number of uniform samples")->check(CLI::PositiveNumber);
  geodesic->add_flag("--compare-oracle", c.compare_oracle, "Report the deviation from the numerical solution");

  auto* spectrum = app.add_subcommand("spectrum", "Period spectrum of the compact quotient");
  add_common(spectrum, true);
  spectrum->add_option("--lattice", c.lattice_file, "Lattice generators JSON (default: the input basis)")
      ->check(CLI::ExistingFile);
  spectrum->add_option("--bound", c.bound, "Exponent bound B")->check(CLI::PositiveNumber);
  spectrum->add_flag("--flat-case", c.flat_case, "Complete computation for flat groups (E = 0)");
  spectrum->add_flag("--torus", c.torus, "Add the fiber and base torus data");
  spectrum->add_flag("--partition", c.partition, "Split the periods into fiber, base and distinguished");

  auto* compare = app.add_subcommand("compare", "Closed form against the oracle on random initial data");
  add_common(compare, true);
  compare->add_option("--ivps", c.ivps, "Number of random IVPs")->check(CLI::PositiveNumber);
  compare->add_option("--t-end", c.t_end, "End of the time interval")->check(CLI::PositiveNumber);
  compare->add_option("--samples", c.samples, "Chebyshev sample count")->check(CLI::Range(2, 100000));

  auto* algebra = app.add_subcommand("algebra", "Print the algebra in normalized JSON form");
  add_common(algebra, true);

  auto* list = app.add_subcommand("list", "Names of the bundled algebras");
  add_common(list, false);
  c.format = "json";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }
  if (list->parsed() && list->count("--format") == 0) c.format = "text";

  try {
    if (validate->parsed()) return run_validate(c);
    if (decompose->parsed()) return run_decompose(c);
    if (curvature->parsed()) return run_curvature(c);
    if (geodesic->parsed()) {
      if (c.ivp_file.empty() && c.ivp_text.empty()) throw Failure{kInput, "geodesic: one of --ivp or --ivp-json"};
      return run_geodesic(c);
    }
    if (spectrum->parsed()) return run_spectrum(c);
    if (compare->parsed()) return run_compare(c);
    if (algebra->parsed()) return run_algebra(c);
    if (list->parsed()) return run_list(c);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed library output: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
