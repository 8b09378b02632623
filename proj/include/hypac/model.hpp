#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hypac {

using ScalarFn = std::function<double(double)>;

/// Double-well nonlinearity f = F' together with the constants every solver
/// reads off it: lambda = -f'(0) and the Lipschitz constant L of f on [-1,1].
///
/// A spec is a plain value and is never mutated after construction. Nothing
/// is validated at construction time so that malformed potentials can still
/// be built and then diagnosed by validate_potential().
struct PotentialSpec {
    enum class Kind { cubic, custom };

    Kind kind = Kind::custom;
    double k = 0.0;  ///< cubic coefficient; meaningful only for Kind::cubic
    ScalarFn f;
    ScalarFn F;
    ScalarFn fprime;
    double lambda = 0.0;
    double lipschitz = 0.0;
    std::string label;
};

struct ProblemParams {
    int n = 2;  ///< dimension of H^n
    PotentialSpec potential;
};

/// Throws InvalidArgument unless n >= 2.
ProblemParams make_params(int n, PotentialSpec potential);

/// f(u) = k u (u^2 - 1), F(u) = (k/4)(u^2 - 1)^2, so f'(0) = -k.
PotentialSpec cubic_potential(double k);

/// Wraps user-supplied evaluators. lambda is read from fprime(0) and the
/// Lipschitz constant is estimated numerically.
PotentialSpec custom_potential(std::string label, ScalarFn f, ScalarFn F, ScalarFn fprime);

/// Tabulated potential from CSV with header `s,f,fprime`. f is a cubic
/// Hermite spline through (s, f, fprime); fprime is a modified-Akima cubic
/// spline through its own column; F is the exact integral of the f spline,
/// pinned so that F(1) = 0. Evaluation outside the table range throws.
PotentialSpec tabulated_potential(std::istream& csv, std::string label = "tabulated");
PotentialSpec load_potential_csv(const std::filesystem::path& path);

namespace checks {
inline constexpr std::string_view zero_set = "F^-1(0) = {-1,+1}";
inline constexpr std::string_view positivity = "F > 0 away from the wells";
inline constexpr std::string_view well_curvature = "F''(+-1) > 0";
inline constexpr std::string_view unstable_origin = "f'(0) < 0";
inline constexpr std::string_view outward_sign = "s f(s) >= 0 for |s| >= 1";
inline constexpr std::string_view growth = "F grows for |s| -> inf (checked on |s| <= 10)";
inline constexpr std::string_view lambda_below_lipschitz = "lambda <= L";
inline constexpr std::string_view single_hump = "f > 0 on (-1,0), f < 0 on (0,1)";
}  // namespace checks

struct ValidationCheck {
    std::string name;
    bool passed = true;
    double worst_s = 0.0;      ///< sample where the condition was closest to (or most) violated
    double worst_value = 0.0;  ///< the quantity evaluated there
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const;
    const ValidationCheck& at(std::string_view name) const;
};

/// Samples the conditions of the double-well hypothesis plus the outward sign
/// condition on [-10, 10]. Requires samples >= 100.
ValidationReport validate_potential(const PotentialSpec& spec, int samples = 4001);

/// max |f'| over [-1, 1]: dense sampling followed by a Brent refinement around
/// the sampled maximiser. Cubic potentials return the closed form 2k.
double lipschitz_on_interval(const PotentialSpec& spec, int grid_size = 4000);

struct RootPair {
    double lo = 0.0;
    double hi = 0.0;
    double discriminant = 0.0;
};

/// Real roots of alpha^2 - (n-1) alpha + mu = 0 in increasing order.
/// Throws ComplexRootsError when (n-1)^2 < 4 mu.
RootPair indicial_roots(int n, double mu);

/// alpha_pm from lambda and beta_pm from L. Pairs with a negative
/// discriminant are flagged as not real and hold NaN.
struct IndicialRoots {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
    double beta_minus = 0.0;
    double beta_plus = 0.0;
    double disc_lambda = 0.0;
    double disc_L = 0.0;
    bool alpha_real = false;
    bool beta_real = false;
};

IndicialRoots compute_indicial_roots(const ProblemParams& params);

struct ChainReport {
    IndicialRoots roots;
    bool applicable = false;  ///< L <= (n-1)^2 / 4
    std::vector<std::pair<std::string, bool>> inequalities;
    bool holds = false;
};

/// Evaluates 0 < a- <= b- <= (n-1)/2 <= b+ <= a+ < n-1. When L > (n-1)^2/4
/// the report comes back with applicable = false and holds = false.
ChainReport root_chain_check(const ProblemParams& params);

}  // namespace hypac
