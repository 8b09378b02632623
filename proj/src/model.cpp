#include "hypac/model.hpp"

#include "hypac/error.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/interpolators/makima.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>

namespace hypac {

ProblemParams make_params(int n, PotentialSpec potential) {
    if (n < 2) {
        throw Error(ErrorCode::invalid_argument, "dimension n must be >= 2");
    }
    return ProblemParams{n, std::move(potential)};
}

PotentialSpec cubic_potential(double k) {
    if (!(k > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "cubic coefficient k must be positive");
    }
    PotentialSpec spec;
    spec.kind = PotentialSpec::Kind::cubic;
    spec.k = k;
    spec.f = [k](double u) { return k * u * (u * u - 1.0); };
    spec.F = [k](double u) {
        const double w = u * u - 1.0;
        return 0.25 * k * w * w;
    };
    spec.fprime = [k](double u) { return k * (3.0 * u * u - 1.0); };
    spec.lambda = k;
    spec.lipschitz = 2.0 * k;
    std::ostringstream os;
    os << "cubic(k=" << k << ")";
    spec.label = os.str();
    return spec;
}

PotentialSpec custom_potential(std::string label, ScalarFn f, ScalarFn F, ScalarFn fprime) {
    PotentialSpec spec;
    spec.kind = PotentialSpec::Kind::custom;
    spec.f = std::move(f);
    spec.F = std::move(F);
    spec.fprime = std::move(fprime);
    spec.label = std::move(label);
    spec.lambda = -spec.fprime(0.0);
    spec.lipschitz = lipschitz_on_interval(spec);
    return spec;
}

namespace {

// Shared, immutable table behind a tabulated potential.
struct Table {
    std::vector<double> s;
    std::vector<double> f;
    std::vector<double> df;
    std::vector<double> cumulative;  // integral of the f spline from s[0] to s[i]
    double offset = 0.0;             // integral from s[0] to 1
    using Hermite = boost::math::interpolators::cubic_hermite<std::vector<double>>;
    using Makima = boost::math::interpolators::makima<std::vector<double>>;
    std::unique_ptr<Hermite> f_spline;
    std::unique_ptr<Makima> df_spline;

    void check_range(double x) const {
        if (x < s.front() || x > s.back()) {
            std::ostringstream os;
            os << "tabulated potential evaluated at " << x << " outside [" << s.front() << ", "
               << s.back() << "]";
            throw Error(ErrorCode::invalid_argument, os.str());
        }
    }

    // Integral of the Hermite cubic over [a, b] inside one cell; two-point Gauss
    // is exact for cubics.
    double cell_integral(double a, double b) const {
        return boost::math::quadrature::gauss<double, 2>::integrate(
            [this](double x) { return (*f_spline)(x); }, a, b);
    }

    double integral_from_start(double x) const {
        auto it = std::upper_bound(s.begin(), s.end(), x);
        std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
        i = std::min(i, s.size() - 2);
        return cumulative[i] + cell_integral(s[i], x);
    }
};

}  // namespace

PotentialSpec tabulated_potential(std::istream& csv, std::string label) {
    std::string line;
    if (!std::getline(csv, line)) {
        throw Error(ErrorCode::io, "empty potential table");
    }
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r'; }),
               line.end());
    if (line != "s,f,fprime") {
        throw Error(ErrorCode::io, "potential table header must be `s,f,fprime`, got `" + line + "`");
    }
    auto table = std::make_shared<Table>();
    while (std::getline(csv, line)) {
        if (line.empty() || line == "\r") continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double s = 0, f = 0, df = 0;
        if (!(row >> s >> f >> df)) {
            throw Error(ErrorCode::io, "malformed potential table row: " + line);
        }
        table->s.push_back(s);
        table->f.push_back(f);
        table->df.push_back(df);
    }
    if (table->s.size() < 4) {
        throw Error(ErrorCode::io, "potential table needs at least 4 rows");
    }
    for (std::size_t i = 1; i < table->s.size(); ++i) {
        if (!(table->s[i] > table->s[i - 1])) {
            throw Error(ErrorCode::io, "potential table abscissae must be strictly increasing");
        }
    }
    if (table->s.front() > -1.0 || table->s.back() < 1.0) {
        throw Error(ErrorCode::io, "potential table must cover [-1, 1]");
    }

    table->f_spline = std::make_unique<Table::Hermite>(std::vector<double>(table->s),
                                                       std::vector<double>(table->f),
                                                       std::vector<double>(table->df));
    table->df_spline = std::make_unique<Table::Makima>(std::vector<double>(table->s),
                                                      std::vector<double>(table->df));
    table->cumulative.assign(table->s.size(), 0.0);
    for (std::size_t i = 1; i < table->s.size(); ++i) {
        table->cumulative[i] =
            table->cumulative[i - 1] + table->cell_integral(table->s[i - 1], table->s[i]);
    }
    table->offset = table->integral_from_start(1.0);

    auto f = [table](double x) {
        table->check_range(x);
        return (*table->f_spline)(x);
    };
    auto F = [table](double x) {
        table->check_range(x);
        return table->integral_from_start(x) - table->offset;
    };
    auto fprime = [table](double x) {
        table->check_range(x);
        return (*table->df_spline)(x);
    };
    return custom_potential(std::move(label), f, F, fprime);
}

PotentialSpec load_potential_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open potential table " + path.string());
    }
    return tabulated_potential(in, path.filename().string());
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::at(std::string_view name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw Error(ErrorCode::invalid_argument, "no validation check named " + std::string(name));
}

ValidationReport validate_potential(const PotentialSpec& spec, int samples) {
    if (samples < 100) {
        throw Error(ErrorCode::invalid_argument, "validate_potential needs at least 100 samples");
    }
    constexpr double kSpan = 10.0;
    constexpr double kWellExclusion = 1e-9;
    constexpr double kFdStep = 1e-5;
    constexpr double kZeroTol = 1e-12;

    std::vector<double> grid(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        grid[static_cast<std::size_t>(i)] = -kSpan + 2.0 * kSpan * i / (samples - 1);
    }

    ValidationReport report;

    {
        ValidationCheck c{std::string(checks::zero_set)};
        const double fp = spec.F(1.0);
        const double fm = spec.F(-1.0);
        c.worst_s = std::abs(fp) >= std::abs(fm) ? 1.0 : -1.0;
        c.worst_value = std::abs(fp) >= std::abs(fm) ? fp : fm;
        c.passed = std::abs(fp) <= kZeroTol && std::abs(fm) <= kZeroTol;
        report.checks.push_back(c);
    }
    {
        ValidationCheck c{std::string(checks::positivity)};
        c.worst_value = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            if (std::abs(s - 1.0) < kWellExclusion || std::abs(s + 1.0) < kWellExclusion) continue;
            const double v = spec.F(s);
            if (v < c.worst_value) {
                c.worst_value = v;
                c.worst_s = s;
            }
        }
        c.passed = c.worst_value > 0.0;
        report.checks.push_back(c);
    }
    {
        ValidationCheck c{std::string(checks::well_curvature)};
        const double cp = (spec.f(1.0 + kFdStep) - spec.f(1.0 - kFdStep)) / (2.0 * kFdStep);
        const double cm = (spec.f(-1.0 + kFdStep) - spec.f(-1.0 - kFdStep)) / (2.0 * kFdStep);
        c.worst_s = cp <= cm ? 1.0 : -1.0;
        c.worst_value = std::min(cp, cm);
        c.passed = cp > 0.0 && cm > 0.0;
        report.checks.push_back(c);
    }
    {
        ValidationCheck c{std::string(checks::unstable_origin)};
        c.worst_s = 0.0;
        c.worst_value = spec.fprime(0.0);
        c.passed = c.worst_value < 0.0;
        report.checks.push_back(c);
    }
    {
        ValidationCheck c{std::string(checks::outward_sign)};
        c.worst_value = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            if (std::abs(s) < 1.0) continue;
            const double v = s * spec.f(s);
            if (v < c.worst_value) {
                c.worst_value = v;
                c.worst_s = s;
            }
        }
        c.passed = c.worst_value >= 0.0;
        report.checks.push_back(c);
    }
    {
        // Heuristic: F non-decreasing in |s| beyond the wells, and F(+-10) above
        // the barrier height max_{[-1,1]} F.
        ValidationCheck c{std::string(checks::growth)};
        double barrier = 0.0;
        for (double s : grid) {
            if (std::abs(s) <= 1.0) barrier = std::max(barrier, spec.F(s));
        }
        bool monotone = true;
        double prev_right = spec.F(1.0);
        double prev_left = spec.F(-1.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double s = grid[i];
            if (s > 1.0) {
                const double v = spec.F(s);
                if (v < prev_right) {
                    monotone = false;
                    c.worst_s = s;
                }
                prev_right = v;
            }
            const double sl = grid[grid.size() - 1 - i];
            if (sl < -1.0) {
                const double v = spec.F(sl);
                if (v < prev_left) {
                    monotone = false;
                    c.worst_s = sl;
                }
                prev_left = v;
            }
        }
        const double edge = std::min(spec.F(kSpan), spec.F(-kSpan));
        c.worst_value = edge - barrier;
        if (monotone) c.worst_s = spec.F(kSpan) <= spec.F(-kSpan) ? kSpan : -kSpan;
        c.passed = monotone && edge > barrier;
        report.checks.push_back(c);
    }
    {
        ValidationCheck c{std::string(checks::lambda_below_lipschitz)};
        c.worst_value = spec.lipschitz - spec.lambda;
        c.passed = spec.lambda <= spec.lipschitz * (1.0 + 1e-12);
        report.checks.push_back(c);
    }
    {
        ValidationCheck c{std::string(checks::single_hump)};
        c.worst_value = std::numeric_limits<double>::infinity();
        for (double s : grid) {
            if (s <= -1.0 || s >= 1.0 || s == 0.0) continue;
            const double v = s < 0.0 ? spec.f(s) : -spec.f(s);
            if (v < c.worst_value) {
                c.worst_value = v;
                c.worst_s = s;
            }
        }
        c.passed = c.worst_value > 0.0;
        report.checks.push_back(c);
    }
    return report;
}

double lipschitz_on_interval(const PotentialSpec& spec, int grid_size) {
    if (grid_size < 1000) {
        throw Error(ErrorCode::invalid_argument, "lipschitz_on_interval needs grid_size >= 1000");
    }
    if (spec.kind == PotentialSpec::Kind::cubic) return 2.0 * spec.k;

    double best = -1.0;
    int best_i = 0;
    const double h = 2.0 / grid_size;
    for (int i = 0; i <= grid_size; ++i) {
        const double v = std::abs(spec.fprime(-1.0 + i * h));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double lo = std::max(-1.0, -1.0 + (best_i - 1) * h);
    const double hi = std::min(1.0, -1.0 + (best_i + 1) * h);
    auto neg = [&spec](double s) { return -std::abs(spec.fprime(s)); };
    const auto [arg, val] = boost::math::tools::brent_find_minima(neg, lo, hi, 50);
    (void)arg;
    return std::max(best, -val);
}

RootPair indicial_roots(int n, double mu) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension n must be >= 2");
    if (!(mu > 0.0)) throw Error(ErrorCode::invalid_argument, "mu must be positive");
    const double b = n - 1.0;
    const double disc = b * b - 4.0 * mu;
    if (disc < 0.0) throw ComplexRootsError(disc);
    // Citardauq form: avoids cancellation in the small root.
    const double q = 0.5 * (b + std::sqrt(disc));
    return RootPair{mu / q, q, disc};
}

IndicialRoots compute_indicial_roots(const ProblemParams& params) {
    IndicialRoots out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double b = params.n - 1.0;
    out.disc_lambda = b * b - 4.0 * params.potential.lambda;
    out.disc_L = b * b - 4.0 * params.potential.lipschitz;
    out.alpha_real = out.disc_lambda >= 0.0 && params.potential.lambda > 0.0;
    out.beta_real = out.disc_L >= 0.0 && params.potential.lipschitz > 0.0;
    if (out.alpha_real) {
        const auto r = indicial_roots(params.n, params.potential.lambda);
        out.alpha_minus = r.lo;
        out.alpha_plus = r.hi;
    } else {
        out.alpha_minus = out.alpha_plus = nan;
    }
    if (out.beta_real) {
        const auto r = indicial_roots(params.n, params.potential.lipschitz);
        out.beta_minus = r.lo;
        out.beta_plus = r.hi;
    } else {
        out.beta_minus = out.beta_plus = nan;
    }
    return out;
}

ChainReport root_chain_check(const ProblemParams& params) {
    ChainReport rep;
    rep.roots = compute_indicial_roots(params);
    const double b = params.n - 1.0;
    rep.applicable = params.potential.lipschitz <= 0.25 * b * b && rep.roots.alpha_real && rep.roots.beta_real;
    if (!rep.applicable) {
        rep.holds = false;
        return rep;
    }
    const auto& r = rep.roots;
    const double half = 0.5 * b;
    // Double roots are computed through a square root of a value that may be a
    // few ulps off zero; allow that much slack in the non-strict links.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * b;
    rep.inequalities = {
        {"0 < alpha_-", r.alpha_minus > 0.0},
        {"alpha_- <= beta_-", r.alpha_minus <= r.beta_minus + slack},
        {"beta_- <= (n-1)/2", r.beta_minus <= half + slack},
        {"(n-1)/2 <= beta_+", half <= r.beta_plus + slack},
        {"beta_+ <= alpha_+", r.beta_plus <= r.alpha_plus + slack},
        {"alpha_+ < n-1", r.alpha_plus < b},
    };
    rep.holds = std::all_of(rep.inequalities.begin(), rep.inequalities.end(),
                            [](const auto& p) { return p.second; });
    return rep;
}

}  // namespace hypac
