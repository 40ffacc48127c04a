#include "intervalize/distributions.hpp"

#include <cmath>
#include <vector>

#include "intervalize/errors.hpp"

namespace itv {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n.
GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

const GaussRule& rule24() {
  static const GaussRule rule = gauss_legendre(24);
  return rule;
}

/// Composite Gauss-Legendre over [a, b] with panels of at most `width`.
template <typename F>
double integrate(F&& f, double a, double b, double width) {
  if (b <= a) return 0.0;
  const GaussRule& rule = rule24();
  int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  double h = (b - a) / panels, total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h, mid = lo + 0.5 * h, half = 0.5 * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += acc * half;
  }
  return total;
}

double beta_cf(double x, double a, double b) {
  // continued fraction for the regularized incomplete beta (modified Lentz)
  const double tiny = 1e-300, eps = 1e-16;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double incomplete_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(x, a, b) / a;
  return 1.0 - front * beta_cf(1.0 - x, b, a) / b;
}

double incomplete_gamma(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16)
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericalError("incomplete gamma series did not converge");
  }
  // continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return 1.0 - h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

double t_cdf(double x, double df) {
  if (df <= 0.0) throw ContractError("t_cdf: df must be positive");
  if (x == 0.0) return 0.5;
  double p = 0.5 * incomplete_beta(df / (df + x * x), 0.5 * df, 0.5);
  return x > 0.0 ? 1.0 - p : p;
}

double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw ContractError("t_quantile: p must be in (0,1)");
  if (p == 0.5) return 0.0;
  double lo = -1e3, hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * std::max(1.0, std::abs(lo))) break;
  }
  return 0.5 * (lo + hi);
}

double f_cdf(double x, double df1, double df2) {
  if (x <= 0.0) return 0.0;
  return incomplete_beta(df1 * x / (df1 * x + df2), 0.5 * df1, 0.5 * df2);
}

double chi_squared_cdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  return incomplete_gamma(0.5 * df, 0.5 * x);
}

namespace {

/// P(range of k iid standard normals <= w).
double range_cdf_normal(double w, int k) {
  if (w <= 0.0) return 0.0;
  if (w > 60.0) return 1.0;  // P(range > 60) underflows for any practical k
  auto integrand = [w, k](double z) {
    double span = normal_cdf(z) - normal_cdf(z - w);
    if (span <= 0.0) return 0.0;
    return k * normal_pdf(z) * std::pow(span, k - 1);
  };
  return integrate(integrand, -8.5, 8.5 + w, 2.0);
}

}  // namespace

double studentized_range_cdf(double q, int k, double df) {
  if (k < 2) throw ContractError("studentized_range_cdf: k must be >= 2");
  if (q <= 0.0) return 0.0;
  if (df <= 0.0 || std::isinf(df)) return range_cdf_normal(q, k);

  // outer integral over s = chi_df / sqrt(df), whose density concentrates
  // around sqrt((df-1)/df) with spread ~ 1/sqrt(2 df)
  const double log_norm = std::log(2.0) + 0.5 * df * std::log(0.5 * df) - std::lgamma(0.5 * df);
  auto outer = [&](double s) {
    double log_f = log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
    return std::exp(log_f) * range_cdf_normal(q * s, k);
  };
  const double sigma = 1.0 / std::sqrt(2.0 * df);
  const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.0;
  const double lo = std::max(0.0, mode - 12.0 * sigma);
  const double hi = mode + 12.0 * sigma + (df < 4.0 ? 4.0 : 0.0);
  return integrate(outer, lo, hi, 2.0 * sigma);
}

double studentized_range_quantile(double alpha, int k, double df) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ContractError("studentized_range_quantile: alpha must be in (0,1)");
  if (k < 2) throw ContractError("studentized_range_quantile: k must be >= 2");
  const double target = 1.0 - alpha;

  double lo = 1e-4, hi = 8.0;
  double flo = studentized_range_cdf(lo, k, df) - target;
  double fhi = studentized_range_cdf(hi, k, df) - target;
  int expand = 0;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = studentized_range_cdf(hi, k, df) - target;
    if (++expand > 30) throw NumericalError("studentized range quantile: no upper bracket");
  }
  // Illinois-damped false position on the bracketed root
  int side = 0;
  for (int i = 0; i < 200; ++i) {
    double mid = (fhi != flo) ? hi - fhi * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    double fmid = studentized_range_cdf(mid, k, df) - target;
    if (fmid < 0.0) {
      lo = mid;
      flo = fmid;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      fhi = fmid;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (hi - lo < 1e-10) return 0.5 * (lo + hi);
  }
  throw NumericalError("studentized range quantile did not converge");
}

}  // namespace itv
