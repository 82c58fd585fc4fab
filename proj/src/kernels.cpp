#include "lrvlab/kernels.hpp"

#include "lrvlab/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace lrvlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form int_0^1 t^{2p} (1 - t^q)^2 dt.
double poly_A_p(int q, int p) {
    return 1.0 / (2 * p + 1) - 2.0 / (2 * p + q + 1) + 1.0 / (2 * p + 2 * q + 1);
}

double integrate(const auto& f, const std::vector<double>& cuts) {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> edges{0.0};
    for (double c : cuts)
        if (c > 0.0 && c < 1.0) edges.push_back(c);
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += gauss_kronrod<double, 61>::integrate(f, edges[i], edges[i + 1], 15, 1e-10);
    return total;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view text) {
    std::map<std::string, std::string, std::less<>> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto item = text.substr(pos, end - pos);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ConfigError("kernel parameter '" + std::string(item) + "' is not of the form key=value");
        out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        pos = end + 1;
    }
    return out;
}

double to_double(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("kernel parameter " + std::string(what) + "='" + s + "' is not a number");
    }
}

int to_int(const std::string& s, std::string_view what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("kernel parameter " + std::string(what) + "='" + s + "' is not an integer");
    return v;
}

} // namespace

Kernel::Kernel(KernelKind kind, int order, double r, double c, std::shared_ptr<const Kernel> base)
    : kind_(kind), order_(order), r_(r), c_(c), base_(std::move(base)) {}

Kernel Kernel::bartlett() { return {KernelKind::bartlett, 1, 0.0, 0.0, nullptr}; }

Kernel Kernel::parzen_poly(int q) {
    if (q < 1) throw DomainError("parzen_poly: q must be a positive integer");
    return {KernelKind::parzen_poly, q, 0.0, 0.0, nullptr};
}

Kernel Kernel::tukey_hanning() { return {KernelKind::tukey_hanning, 2, 0.0, 0.0, nullptr}; }

Kernel Kernel::parzen_classic() { return {KernelKind::parzen_classic, 2, 0.0, 0.0, nullptr}; }

Kernel Kernel::modified_poly(int q) {
    if (q < 1) throw DomainError("modified_poly: q must be a positive integer");
    return {KernelKind::modified_poly, q, 0.0, 0.0, nullptr};
}

Kernel Kernel::truncated() { return {KernelKind::truncated, 0, 0.0, 0.0, nullptr}; }

Kernel Kernel::trapezoidal(double flat) {
    if (!(flat > 0.0 && flat < 1.0)) throw DomainError("trapezoidal: flat part must lie in (0, 1)");
    return {KernelKind::trapezoidal, 0, 0.0, flat, nullptr};
}

Kernel Kernel::lugsail(const Kernel& base, double r, double c) {
    if (!(r >= 1.0)) throw DomainError("lugsail: r must be at least 1");
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("lugsail: c must lie in [0, 1)");
    return {KernelKind::lugsail, 0, r, c, std::make_shared<const Kernel>(base)};
}

Kernel Kernel::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto head = spec.substr(0, colon);
    const auto params = colon == std::string_view::npos ? decltype(parse_params("")){} : parse_params(spec.substr(colon + 1));
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = params.find(key);
        if (it == params.end()) return std::nullopt;
        return it->second;
    };
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : params) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
                throw ConfigError("kernel '" + std::string(head) + "' does not take parameter '" + k + "'");
        }
    };
    try {
        if (head == "bartlett") {
            check_keys({});
            return bartlett();
        }
        if (head == "parzen_poly" || head == "modified_poly") {
            check_keys({"q"});
            const int q = get("q") ? to_int(*get("q"), "q") : 2;
            return head == "parzen_poly" ? parzen_poly(q) : modified_poly(q);
        }
        if (head == "tukey_hanning") {
            check_keys({});
            return tukey_hanning();
        }
        if (head == "parzen_classic") {
            check_keys({});
            return parzen_classic();
        }
        if (head == "truncated") {
            check_keys({});
            return truncated();
        }
        if (head == "trapezoidal") {
            check_keys({"c"});
            return trapezoidal(get("c") ? to_double(*get("c"), "c") : 0.5);
        }
        if (head == "lugsail") {
            check_keys({"base", "base_q", "base_c", "r", "c"});
            std::string base_spec = get("base").value_or("bartlett");
            if (auto bq = get("base_q")) base_spec += ":q=" + *bq;
            if (auto bc = get("base_c")) base_spec += ":c=" + *bc;
            const double r = get("r") ? to_double(*get("r"), "r") : 3.0;
            const double c = get("c") ? to_double(*get("c"), "c") : 0.5;
            return lugsail(parse(base_spec), r, c);
        }
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown kernel '" + std::string(head) + "'");
}

std::string Kernel::name() const {
    switch (kind_) {
    case KernelKind::bartlett: return "bartlett";
    case KernelKind::parzen_poly: return "parzen_poly:q=" + std::to_string(order_);
    case KernelKind::tukey_hanning: return "tukey_hanning";
    case KernelKind::parzen_classic: return "parzen_classic";
    case KernelKind::modified_poly: return "modified_poly:q=" + std::to_string(order_);
    case KernelKind::truncated: return "truncated";
    case KernelKind::trapezoidal: return "trapezoidal:c=" + format_double(c_);
    case KernelKind::lugsail: {
        const std::string base = base_->name();
        const auto colon = base.find(':');
        std::string out = "lugsail:base=" + base.substr(0, colon);
        if (colon != std::string::npos) out += ",base_" + base.substr(colon + 1);
        return out + ",r=" + format_double(r_) + ",c=" + format_double(c_);
    }
    }
    return "unknown";
}

double Kernel::operator()(double t) const noexcept {
    const double a = std::abs(t);
    if (a >= 1.0) return 0.0;
    switch (kind_) {
    case KernelKind::bartlett: return 1.0 - a;
    case KernelKind::parzen_poly: return 1.0 - std::pow(a, order_);
    case KernelKind::tukey_hanning: return 0.5 * (1.0 + std::cos(kPi * a));
    case KernelKind::parzen_classic:
        if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
        return 2.0 * (1.0 - a) * (1.0 - a) * (1.0 - a);
    case KernelKind::modified_poly: {
        const int q = order_;
        const double ca = 4.0 - (q + 1) * std::pow(2.0, q);
        const double cb = q * std::pow(2.0, q + 1) - 4.0;
        if (a <= 0.5) return 1.0 - std::pow(a, q) + ca * std::pow(a, q + 1) + cb * std::pow(a, q + 2);
        const double u = 1.0 - a;
        return std::pow(u, q) - ca * std::pow(u, q + 1) - cb * std::pow(u, q + 2);
    }
    case KernelKind::truncated: return 1.0;
    case KernelKind::trapezoidal: return a <= c_ ? 1.0 : (1.0 - a) / (1.0 - c_);
    case KernelKind::lugsail: return ((*base_)(a) - c_ * (*base_)(r_ * a)) / (1.0 - c_);
    }
    return 0.0;
}

std::optional<int> Kernel::q() const {
    switch (kind_) {
    case KernelKind::truncated:
    case KernelKind::trapezoidal: return std::nullopt;
    case KernelKind::lugsail: {
        const auto b = B();
        if (!b) return std::nullopt;
        return base_->q();
    }
    default: return order_;
    }
}

std::optional<double> Kernel::B() const {
    switch (kind_) {
    case KernelKind::bartlett:
    case KernelKind::parzen_poly:
    case KernelKind::modified_poly: return -1.0;
    case KernelKind::tukey_hanning: return -kPi * kPi / 4.0;
    case KernelKind::parzen_classic: return -6.0;
    case KernelKind::truncated:
    case KernelKind::trapezoidal: return std::nullopt;
    case KernelKind::lugsail: {
        const auto q0 = base_->q();
        const auto b0 = base_->B();
        if (!q0 || !b0) return std::nullopt;
        const double b = *b0 * (1.0 - c_ * std::pow(r_, *q0)) / (1.0 - c_);
        if (std::abs(b) < 1e-12) return std::nullopt;
        return b;
    }
    }
    return std::nullopt;
}

std::optional<int> Kernel::q_prime() const {
    switch (kind_) {
    case KernelKind::bartlett:
    case KernelKind::parzen_poly:
    case KernelKind::trapezoidal: return 1;
    case KernelKind::tukey_hanning: return 2;
    case KernelKind::parzen_classic: return 3;
    case KernelKind::modified_poly: return order_;
    case KernelKind::truncated:
    case KernelKind::lugsail: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> Kernel::B_prime() const {
    switch (kind_) {
    case KernelKind::bartlett:
    case KernelKind::modified_poly: return -1.0;
    case KernelKind::parzen_poly: return -static_cast<double>(order_);
    case KernelKind::tukey_hanning: return -kPi * kPi / 4.0;
    case KernelKind::parzen_classic: return -2.0;
    case KernelKind::trapezoidal: return -1.0 / (1.0 - c_);
    case KernelKind::truncated:
    case KernelKind::lugsail: return std::nullopt;
    }
    return std::nullopt;
}

std::vector<double> Kernel::breakpoints() const {
    switch (kind_) {
    case KernelKind::parzen_classic:
    case KernelKind::modified_poly: return {0.5};
    case KernelKind::trapezoidal: return {c_};
    case KernelKind::lugsail: {
        auto pts = base_->breakpoints();
        const std::size_t own = pts.size();
        for (std::size_t i = 0; i < own; ++i) pts.push_back(pts[i] / r_);
        pts.push_back(1.0 / r_);
        return pts;
    }
    default: return {};
    }
}

double Kernel::A_p(int p) const {
    if (p < 0) throw DomainError("A_p: p must be non-negative");
    switch (kind_) {
    case KernelKind::bartlett:
    case KernelKind::parzen_poly: return poly_A_p(order_, p);
    case KernelKind::truncated: return 1.0 / (2 * p + 1);
    default: break;
    }
    const auto integrand = [&](double t) {
        const double k = (*this)(t);
        return std::pow(t, 2 * p) * k * k;
    };
    return integrate(integrand, breakpoints());
}

double Kernel::kappa() const {
    switch (kind_) {
    case KernelKind::bartlett:
    case KernelKind::parzen_poly: return 2.0 * order_ / (order_ + 1.0);
    case KernelKind::truncated: return 2.0;
    default: break;
    }
    return 2.0 * integrate([&](double t) { return (*this)(t); }, breakpoints());
}

KernelConstants constants(const Kernel& kernel, int p) {
    if (p < 0) throw DomainError("constants: p must be non-negative");
    return {kernel.A(), kernel.A_p(p), kernel.kappa()};
}

double k_diff(const Kernel& kernel, const DifferenceSequence& seq, double lambda, double t) {
    if (!(lambda > 0.0)) throw DomainError("k_diff: lambda must be positive");
    const int m = seq.order();
    const double lo = std::ceil(-(1.0 + t) / lambda);
    const double hi = std::floor((1.0 - t) / lambda);
    const long s_lo = static_cast<long>(std::max(lo, -static_cast<double>(m)));
    const long s_hi = static_cast<long>(std::min(hi, static_cast<double>(m)));
    double acc = 0.0;
    for (long s = s_lo; s <= s_hi; ++s) acc += seq.delta(static_cast<int>(s)) * kernel(t + lambda * static_cast<double>(s));
    return acc;
}

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

} // namespace

double k_diff_lattice(const Kernel& kernel, const DifferenceSequence& seq, int ell, int h, long k) {
    if (ell < 1 || h < 1) throw DomainError("k_diff_lattice: ell and h must be positive");
    const long m = seq.order();
    const long s_lo = std::max(ceil_div(-(ell + k), h), -m);
    const long s_hi = std::min(floor_div(ell - k, h), m);
    double acc = 0.0;
    for (long s = s_lo; s <= s_hi; ++s)
        acc += seq.delta(static_cast<int>(s)) * kernel(static_cast<double>(k + h * s) / ell);
    return acc;
}

} // namespace lrvlab
