#include "nilgeo/nilgeo.h"

#include "nilgeo/bundled.hpp"
#include "nilgeo/io.hpp"

#include <cstring>
#include <new>
#include <random>

using namespace nilgeo;

struct nilgeo_algebra {
  MetricAlgebra alg;
};

struct nilgeo_lattice {
  MetricAlgebra alg;
  LatticeSpec spec;
};

namespace {

thread_local std::string last_error;

nilgeo_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return NILGEO_ERR_DIMENSION_MISMATCH;
    case ErrorCode::InvalidAlgebra: return NILGEO_ERR_INVALID_ALGEBRA;
    case ErrorCode::SingularGram: return NILGEO_ERR_SINGULAR_GRAM;
    case ErrorCode::DegenerateForm: return NILGEO_ERR_DEGENERATE_FORM;
    case ErrorCode::NonCentralArgument: return NILGEO_ERR_NONCENTRAL_ARGUMENT;
    case ErrorCode::NonOrthogonalKernelSplit: return NILGEO_ERR_NONORTHOGONAL_KERNEL_SPLIT;
    case ErrorCode::SingularJOnE2: return NILGEO_ERR_SINGULAR_J_ON_E2;
    case ErrorCode::DegenerateCenter: return NILGEO_ERR_DEGENERATE_CENTER;
    case ErrorCode::StepSizeUnderflow: return NILGEO_ERR_STEP_SIZE_UNDERFLOW;
    case ErrorCode::CausalInconsistency: return NILGEO_ERR_CAUSAL_INCONSISTENCY;
    case ErrorCode::NonRationalStructure: return NILGEO_ERR_NON_RATIONAL_STRUCTURE;
    case ErrorCode::NotABasis: return NILGEO_ERR_NOT_A_BASIS;
    case ErrorCode::NotCanonical: return NILGEO_ERR_NOT_CANONICAL;
    case ErrorCode::FlatCaseOnly: return NILGEO_ERR_FLAT_CASE_ONLY;
    case ErrorCode::PerpConditionFailed: return NILGEO_ERR_PERP_CONDITION_FAILED;
    case ErrorCode::NoXiSolution: return NILGEO_ERR_NO_XI_SOLUTION;
    case ErrorCode::InconsistentRatio: return NILGEO_ERR_INCONSISTENT_RATIO;
    case ErrorCode::ParseError: return NILGEO_ERR_PARSE;
    case ErrorCode::SchemaError: return NILGEO_ERR_SCHEMA;
    case ErrorCode::InvalidArgument: return NILGEO_ERR_INVALID_ARGUMENT;
  }
  return NILGEO_ERR_INTERNAL;
}

template <class F>
nilgeo_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return NILGEO_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const Json::exception& e) {
    last_error = std::string("SchemaError: ") + e.what();
    return NILGEO_ERR_SCHEMA;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NILGEO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NILGEO_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const Json& j, char** out) {
  require(out, "output pointer");
  *out = dup_string(j.dump(2));
}

nilgeo_options options_or_default(const nilgeo_options* opt) {
  nilgeo_options o;
  nilgeo_options_default(&o);
  return opt ? *opt : o;
}

OdeOptions ode_options(const nilgeo_options& o) {
  OdeOptions ode;
  ode.abs_tol = o.ode_abs_tol;
  ode.rel_tol = o.ode_rel_tol;
  return ode;
}

}  // namespace

extern "C" {

void nilgeo_options_default(nilgeo_options* opt) {
  if (!opt) return;
  opt->tau_null = kDefaultTauNull;
  opt->tau_rank = kDefaultTauRank;
  opt->tau_fix = 1e-9;
  opt->ode_abs_tol = 1e-16;
  opt->ode_rel_tol = 1e-16;
  opt->compare_tol = 1e-8;
  opt->seed = 20240611ull;
}

const char* nilgeo_status_string(nilgeo_status s) {
  switch (s) {
    case NILGEO_OK: return "ok";
    case NILGEO_ERR_INTERNAL: return "internal error";
    default: break;
  }
  static const ErrorCode codes[] = {
      ErrorCode::DimensionMismatch,    ErrorCode::InvalidAlgebra,       ErrorCode::SingularGram,
      ErrorCode::DegenerateForm,       ErrorCode::NonCentralArgument,   ErrorCode::NonOrthogonalKernelSplit,
      ErrorCode::SingularJOnE2,        ErrorCode::DegenerateCenter,     ErrorCode::StepSizeUnderflow,
      ErrorCode::CausalInconsistency,  ErrorCode::NonRationalStructure, ErrorCode::NotABasis,
      ErrorCode::NotCanonical,         ErrorCode::FlatCaseOnly,         ErrorCode::PerpConditionFailed,
      ErrorCode::NoXiSolution,         ErrorCode::InconsistentRatio,    ErrorCode::ParseError,
      ErrorCode::SchemaError,          ErrorCode::InvalidArgument};
  const int k = static_cast<int>(s) - 1;
  if (k >= 0 && k < static_cast<int>(sizeof(codes) / sizeof(codes[0]))) return error_code_name(codes[k]);
  return "unknown status";
}

const char* nilgeo_last_error(void) { return last_error.c_str(); }

void nilgeo_string_free(char* s) { std::free(s); }

nilgeo_status nilgeo_algebra_from_json(const char* text, nilgeo_algebra** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "output pointer");
    *out = new nilgeo_algebra{algebra_from_json(parse_json(text))};
  });
}

nilgeo_status nilgeo_algebra_bundled(const char* name, nilgeo_algebra** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "output pointer");
    *out = new nilgeo_algebra{bundled_algebra(name)};
  });
}

void nilgeo_algebra_free(nilgeo_algebra* alg) { delete alg; }

int nilgeo_algebra_dim(const nilgeo_algebra* alg) { return alg ? alg->alg.dim() : 0; }

int nilgeo_algebra_is_exact(const nilgeo_algebra* alg) { return alg && alg->alg.mode() == Mode::Exact; }

nilgeo_status nilgeo_algebra_to_json(const nilgeo_algebra* alg, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    emit(algebra_to_json(alg->alg), out);
  });
}

nilgeo_status nilgeo_bundled_names(char** out) {
  return guarded([&] { emit(Json(bundled_names()), out); });
}

nilgeo_status nilgeo_bracket(const nilgeo_algebra* alg, const double* x, const double* y, double* out) {
  return guarded([&] {
    require(alg, "algebra");
    require(x, "x");
    require(y, "y");
    require(out, "out");
    const int n = alg->alg.dim();
    Vec<double> b = alg->alg.approx().bracket(Eigen::Map<const Vec<double>>(x, n), Eigen::Map<const Vec<double>>(y, n));
    for (int i = 0; i < n; ++i) out[i] = b[i];
  });
}

nilgeo_status nilgeo_inner(const nilgeo_algebra* alg, const double* x, const double* y, double* out) {
  return guarded([&] {
    require(alg, "algebra");
    require(x, "x");
    require(y, "y");
    require(out, "out");
    const int n = alg->alg.dim();
    *out = alg->alg.approx().inner(Eigen::Map<const Vec<double>>(x, n), Eigen::Map<const Vec<double>>(y, n));
  });
}

nilgeo_status nilgeo_validate(const nilgeo_algebra* alg, int* ok, char** report) {
  return guarded([&] {
    require(alg, "algebra");
    ValidationReport r = validate(alg->alg);
    if (ok) *ok = r.ok() ? 1 : 0;
    Json j = validation_to_json(r);
    j["mode"] = alg->alg.mode() == Mode::Exact ? "exact" : "float";
    j["dim"] = alg->alg.dim();
    emit(j, report);
  });
}

nilgeo_status nilgeo_decompose(const nilgeo_algebra* alg, char** frame) {
  return guarded([&] {
    require(alg, "algebra");
    const ExactAlgebra& a = alg->alg.exact();
    emit(frame_to_json(a, witt_decompose(a)), frame);
  });
}

nilgeo_status nilgeo_curvature(const nilgeo_algebra* alg, int adapted, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    const ExactAlgebra& a = alg->alg.exact();
    WittFrame f = witt_decompose(a);
    Json j = curvature_table_to_json(a, f, curvature_table(a, f, adapted != 0), adapted != 0);
    j["is_flat"] = is_flat(a);
    j["structurally_flat"] = structurally_flat(a, f);
    j["constant_curvature_alarm"] = constant_curvature_alarm(a, f);
    // numerators on the planes spanned by pairs of central basis vectors
    // and by their sums, which covers the bilinear cross terms
    bool central_flat = true;
    MatQ c(a.dim(), f.du + f.dz);
    c << f.vectors(Part::U), f.vectors(Part::Z);
    for (int i = 0; i < c.cols(); ++i)
      for (int k = i + 1; k < c.cols(); ++k) {
        const VecQ x = c.col(i), y = c.col(k);
        if (sec_numerator(a, x, y) != 0) central_flat = false;
        for (int l = 0; l < c.cols(); ++l)
          if (l != i && l != k && sec_numerator(a, VecQ(x + c.col(l)), y) != 0) central_flat = false;
      }
    j["central_planes_flat"] = central_flat;
    emit(j, out);
  });
}

nilgeo_status nilgeo_geodesic(const nilgeo_algebra* alg, const char* ivp, const double* times, size_t n_times,
                              int compare_oracle, const nilgeo_options* opt, int* breach, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    require(ivp, "ivp");
    if (n_times > 0) require(times, "times");
    const nilgeo_options o = options_or_default(opt);
    GeodesicContext ctx(alg->alg.exact(), o.tau_rank);
    GeodesicIvp g = ivp_from_json(ctx, parse_json(ivp));
    std::vector<Real> ts;
    for (size_t k = 0; k < n_times; ++k) {
      if (!(times[k] >= 0)) throw Error(ErrorCode::InvalidArgument, "sample times must be nonnegative");
      ts.push_back(times[k]);
    }
    Json j;
    j["ivp"] = ivp_to_json(ctx, g);
    const Vec<Real> w = g.velocity();
    j["causal"] = causal_name(causal_character(ctx.algebra(), w, o.tau_null));
    j["speed"] = static_cast<double>(ctx.algebra().inner(w, w));
    Json states = Json::array();
    std::vector<GeodesicState> closed;
    bool have_closed = true;
    try {
      ClosedFormGeodesic cf(ctx, g);
      for (Real t : ts) closed.push_back(cf.at(t));
      for (const auto& s : closed) states.push_back(state_to_json(ctx, s));
      j["method"] = "closed-form";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonOrthogonalKernelSplit) throw;
      have_closed = false;
      j["method"] = "oracle";
      j["note"] = "ker J is degenerate; the closed form does not apply";
    }
    if (!have_closed || compare_oracle) {
      std::vector<GeodesicState> orc = ode_oracle(ctx, g, ts, ode_options(o));
      if (!have_closed) {
        for (const auto& s : orc) states.push_back(state_to_json(ctx, s));
      } else {
        Json oj = Json::array();
        Real dev = 0;
        for (std::size_t k = 0; k < orc.size(); ++k) {
          oj.push_back(state_to_json(ctx, orc[k]));
          dev = std::max(dev, Vec<Real>(closed[k].position - orc[k].position).cwiseAbs().maxCoeff());
        }
        j["oracle"] = oj;
        j["max_deviation"] = static_cast<double>(dev);
        j["tolerance"] = o.compare_tol;
        if (breach) *breach = dev > o.compare_tol;
      }
    }
    j["states"] = states;
    emit(j, out);
  });
}

nilgeo_status nilgeo_compare(const nilgeo_algebra* alg, int n_ivps, double t_end, int n_samples,
                             const nilgeo_options* opt, int* breach, char** out) {
  return guarded([&] {
    require(alg, "algebra");
    if (n_ivps < 1 || n_samples < 2 || !(t_end > 0))
      throw Error(ErrorCode::InvalidArgument, "need n_ivps >= 1, n_samples >= 2 and t_end > 0");
    const nilgeo_options o = options_or_default(opt);
    GeodesicContext ctx(alg->alg.exact(), o.tau_rank);
    std::mt19937_64 rng(o.seed);
    const std::vector<Real> grid = chebyshev_grid(t_end, n_samples);
    OracleComparison worst;
    int skipped = 0;
    for (int k = 0; k < n_ivps; ++k) {
      GeodesicIvp g = random_ivp(ctx, rng);
      OracleComparison c;
      try {
        c = compare_with_oracle(ctx, g, grid, ode_options(o));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonOrthogonalKernelSplit) throw;
        ++skipped;
        continue;
      }
      worst.position = std::max(worst.position, c.position);
      worst.body = std::max(worst.body, c.body);
      worst.speed_drift = std::max(worst.speed_drift, c.speed_drift);
      worst.integral_drift = std::max(worst.integral_drift, c.integral_drift);
      worst.samples += c.samples;
    }
    const bool bad = worst.position > o.compare_tol || worst.body > o.compare_tol ||
                     worst.speed_drift > 1e-9 || worst.integral_drift > 1e-9;
    if (breach) *breach = bad;
    emit(Json{{"ivps", n_ivps},
              {"skipped_degenerate_split", skipped},
              {"samples", worst.samples},
              {"t_end", t_end},
              {"seed", o.seed},
              {"max_position_deviation", static_cast<double>(worst.position)},
              {"max_body_deviation", static_cast<double>(worst.body)},
              {"max_speed_drift", static_cast<double>(worst.speed_drift)},
              {"max_first_integral_drift", static_cast<double>(worst.integral_drift)},
              {"tolerance", o.compare_tol},
              {"breach", bad}},
         out);
  });
}

nilgeo_status nilgeo_lattice_from_json(const nilgeo_algebra* alg, const char* text, nilgeo_lattice** out) {
  return guarded([&] {
    require(alg, "algebra");
    require(text, "text");
    require(out, "output pointer");
    *out = new nilgeo_lattice{alg->alg, lattice_from_json(alg->alg, parse_json(text))};
  });
}

nilgeo_status nilgeo_lattice_standard(const nilgeo_algebra* alg, nilgeo_lattice** out) {
  return guarded([&] {
    require(alg, "algebra");
    require(out, "output pointer");
    std::vector<VecQ> logs;
    for (int k = 0; k < alg->alg.dim(); ++k) logs.push_back(unit_vector<Rational>(alg->alg.dim(), k));
    *out = new nilgeo_lattice{alg->alg, build_lattice(alg->alg, logs)};
  });
}

void nilgeo_lattice_free(nilgeo_lattice* lat) { delete lat; }

nilgeo_status nilgeo_lattice_to_json(const nilgeo_lattice* lat, char** out) {
  return guarded([&] {
    require(lat, "lattice");
    emit(lattice_to_json(lat->spec), out);
  });
}

nilgeo_status nilgeo_torus(const nilgeo_lattice* lat, int bound, char** out) {
  return guarded([&] {
    require(lat, "lattice");
    const ExactAlgebra& a = lat->alg.exact();
    TorusData td = torus_data(a, lat->spec);
    Json j = torus_to_json(td);
    auto spectrum = [&](const MatQ& vecs) -> Json {
      if (vecs.cols() == 0) return nullptr;
      MatQ g = vecs.transpose() * a.gram() * vecs;
      if (!nilgeo::inverse(g)) return "skipped: degenerate inner product on this torus";
      return torus_spectrum_to_json(flat_torus_spectrum(vecs, a.gram(), bound));
    };
    j["bound"] = bound;
    j["fiber_spectrum"] = spectrum(td.central_lattice);
    j["base_spectrum"] = spectrum(td.projected_lattice);
    emit(j, out);
  });
}

nilgeo_status nilgeo_spectrum(const nilgeo_lattice* lat, int bound, int flat_case, int partition,
                              const nilgeo_options* opt, int* breach, char** out) {
  return guarded([&] {
    require(lat, "lattice");
    const nilgeo_options o = options_or_default(opt);
    const ExactAlgebra& a = lat->alg.exact();
    PeriodSpectrum ps = flat_case ? flat_group_spectrum(a, lat->spec, bound) : translated_spectrum(a, lat->spec, bound);
    GeodesicContext ctx(a, lat->spec.frame, o.tau_rank);
    Json j = spectrum_to_json(ps);
    j["method"] = flat_case ? "flat-group" : "translated-one-parameter";
    // outside the flat case only the one-parameter translates are listed
    j["complete_up_to_bound"] = flat_case != 0;
    Real worst = 0;
    bool bad = false;
    for (std::size_t k = 0; k < ps.records.size(); ++k) {
      const PeriodRecord& r = ps.records[k];
      GeodesicIvp g = flat_case ? flat_translated_ivp(ctx, a, r.phi.log, r.omega)
                                : translated_ivp(ctx, translated_geodesic(a, lat->spec.frame, r.phi.log));
      Vec<Real> phi = ctx.to_adapted(to_real<Real>(r.phi.log));
      Real d = translation_defect(ctx, phi, g, r.omega, translation_sample_times(r.omega));
      j["records"][k]["translation_defect"] = static_cast<double>(d);
      j["records"][k]["certified"] = d <= o.compare_tol;
      worst = std::max(worst, d);
      bad = bad || d > o.compare_tol;
    }
    j["max_translation_defect"] = static_cast<double>(worst);
    j["tolerance"] = o.compare_tol;
    j["breach"] = bad;
    if (breach) *breach = bad;
    if (partition) {
      SpectrumPartition p = spectrum_partition(a, lat->spec, ps.records);
      auto omegas = [](const std::vector<PeriodRecord>& rs) {
        Json arr = Json::array();
        for (const auto& r : rs) arr.push_back(r.omega);
        return arr;
      };
      j["partition"] = {{"fiber", omegas(p.fiber)},
                        {"base", omegas(p.base)},
                        {"distinguished", omegas(p.distinguished)},
                        {"caveat",
                         "unsubtracted: periods coming only from geodesics that project to null geodesics in "
                         "both tori are not removed"}};
    }
    emit(j, out);
  });
}

nilgeo_status nilgeo_translated_geodesic(const nilgeo_lattice* lat, const char* phi, char** out) {
  return guarded([&] {
    require(lat, "lattice");
    require(phi, "phi");
    const ExactAlgebra& a = lat->alg.exact();
    VecQ log = vector_from_json(parse_json(phi), a.dim());
    TranslatedGeodesic tg = translated_geodesic(a, lat->spec.frame, log);
    GeodesicContext ctx(a, lat->spec.frame);
    Json j = {{"a_star", vector_to_json(tg.a_star)},
              {"x_star", vector_to_json(tg.x_star)},
              {"a_prime", vector_to_json(tg.a_prime)},
              {"xi", vector_to_json(tg.xi)},
              {"direction", vector_to_json(tg.direction)},
              {"norm_sq", rational_to_json(tg.norm_sq)},
              {"omega_star", tg.omega_star},
              {"null", tg.null},
              {"u_components_coincide", tg.u_components_coincide},
              {"ivp", ivp_to_json(ctx, translated_ivp(ctx, tg))}};
    if (!tg.null) {
      Vec<Real> p = ctx.to_adapted(to_real<Real>(log));
      j["translation_defect"] = static_cast<double>(
          translation_defect(ctx, p, translated_ivp(ctx, tg), tg.omega_star, translation_sample_times(tg.omega_star)));
    }
    emit(j, out);
  });
}

}  // extern "C"
