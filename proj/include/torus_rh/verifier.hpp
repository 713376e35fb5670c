#pragma once

// Residual reports certifying the identities of the model problem.

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "torus_rh/model_rh.hpp"

namespace torus_rh {

using MetaValue = std::variant<double, std::string, std::vector<double>>;

enum class ReportStatus { evaluated, undefined_phase, error };

const char* to_string(ReportStatus s) noexcept;

struct ResidualReport {
  std::string identity_name;
  std::size_t sample_count = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  ReportStatus status = ReportStatus::evaluated;
  std::vector<std::pair<std::string, MetaValue>> metadata;

  void add(std::string key, MetaValue v) { metadata.emplace_back(std::move(key), std::move(v)); }
};

// Sets max/mean from the samples and pass from the tolerance.
ResidualReport make_report(std::string name, const std::vector<double>& residuals, double tolerance);

// Pass thresholds, overridable by name (see keys()).
struct Tolerances {
  double theta = 1e-12;
  double periods = 1e-10;
  double abel = 1e-9;
  double abel_infinity = 1e-8;
  double asymptotic_slope = -2.7;
  double jump = 1e-7;
  double algebraic = 1e-9;
  double symmetry = 1e-10;
  double normalization = 1e-8;
  double exponent_window = 0.05;
  double decomposition = 1e-10;
  double ratio = 1e-9;
  double abel_condition = 1e-8;

  // Throws Error(invalid_argument) for an unknown key or a bad value.
  void set(const std::string& key, double value);
  static std::vector<std::string> keys();
};

struct ContourPlan {
  std::vector<double> y;  // contour points iy, y ∈ [-c, c]
  double margin = 0.0;    // minimum distance kept from ±ia, ±ic
  unsigned seed = 0;
};

// Length scale min(a, c-a) for margins, offsets and fit radii.
double sampling_scale(const GapSpec& g) noexcept;

// count points on [ic, -ic]: a quarter uniform on each cut, the rest on the
// middle segment, all at least margin_frac·min(a, c-a) from ±ia, ±ic.
ContourPlan make_contour_plan(const GapSpec& g, int count, unsigned seed, double margin_frac = 0.05);

// One-sided sample points k = iy ± ε, ε = f·min(a, c-a) (Re k > 0 is the + side), prepared once
// and shared by every field and every phase.
struct PreparedPlan {
  ContourPlan plan;
  std::vector<double> offsets;                  // ε values, decreasing
  std::vector<std::vector<PreparedPoint>> plus;  // [point][offset]
  std::vector<std::vector<PreparedPoint>> minus;
  std::vector<BoundaryPoint> contour;           // for the jump matrix
};

// Throws Error(sampling_too_close) if a plan point is closer to a branch
// point than ten times the largest offset.
PreparedPlan prepare_plan(const SurfaceContext& ctx, const ContourPlan& plan,
                          std::vector<double> offset_fracs = {1e-3, 1e-4, 1e-5});

// A solution seen as a 2x2 field; vector solutions use row 0 only.
struct FieldSpec {
  std::string name;
  int rows = 2;
  std::function<Mat2(const PreparedPoint&)> eval;
  bool singular_at_origin = false;
};

FieldSpec vector_field(std::string name, std::function<Vec2(const PreparedPoint&)> f, bool singular_at_origin = false);

// Boundary values extrapolated to ε → 0 (polynomial through the offsets);
// residual ‖S₊ - S₋v‖ / max(1, ‖S₋‖). Per-offset residuals go to metadata.
ResidualReport certify_jump(const FieldSpec& field, const PreparedPlan& plan, const GapSpec& g, PhaseParam lam,
                            double tolerance);

struct ExponentFit {
  cplx center;
  double exponent = 0.0;
  double confidence = 0.0;  // R² of the log-log fit
  std::vector<double> radii;
};

// Common least-squares slope of log‖S(κ + r e^{iφ_j})‖ against log r over the
// rays φ_j = π/4 + jπ/2 (one intercept per ray). Throws Error(degenerate_fit)
// when S is bounded there (slope ≥ -0.05) or values fall below 1e-300.
ExponentFit fit_singularity(const std::function<double(cplx)>& norm_at, cplx center, std::vector<double> radii);

// Polynomial extrapolation to x = 0 of samples (x_i, f_i) (Neville).
Vec2 extrapolate_to_zero(const std::vector<double>& x, const std::vector<Vec2>& f);
Mat2 extrapolate_to_zero(const std::vector<double>& x, const std::vector<Mat2>& f);

// Nonuniqueness witness m(k)/k: jump, anti-symmetry, decay, and (Λ̃ ∈ ℤ)
// agreement with the N̂_a solution.
std::vector<ResidualReport> vanishing_witness(const ModelSolutions& ms, const PreparedPlan& plan,
                                              const Tolerances& tol, unsigned seed);

struct SuiteOptions {
  Tolerances tol;
  int contour_points = 200;
  bool include_corruption = true;
};

// Every identity for one (g, Λ̃); member errors become failed reports.
std::vector<ResidualReport> full_suite(const GapSpec& g, PhaseParam lam, unsigned seed, const SuiteOptions& opt = {});

// Same, reusing a surface context and prepared contour plan.
std::vector<ResidualReport> full_suite(const std::shared_ptr<const SurfaceContext>& ctx, const PreparedPlan& plan,
                                       PhaseParam lam, unsigned seed, const SuiteOptions& opt = {});

// Single-entry corruption (factor 1+δ) of every solution; each report passes
// when the corrupted field fails its jump certification.
std::vector<ResidualReport> corruption_sweep(const ModelSolutions& ms, const PreparedPlan& plan, double delta,
                                             double jump_tolerance);

// Fields certified by the suite, by name: m, M1, M2, M3, witness.
std::vector<FieldSpec> solution_fields(const ModelSolutions& ms);

bool all_pass(const std::vector<ResidualReport>& reports) noexcept;

}  // namespace torus_rh
