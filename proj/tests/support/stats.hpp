// Small statistical helpers for randomized tests: chi-square goodness-of-fit
// and two-sample Kolmogorov-Smirnov p-values.  Standard series/continued
// fraction evaluations of the incomplete gamma function.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace teststat {

inline double gammln(double x) {
  static const double cof[6] = {76.18009172947146,  -86.50532032941677, 24.01409824083091,
                                -1.231739572450155, 0.1208650973866179e-2, -0.5395239384953e-5};
  double y = x, tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (double c : cof) ser += c / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

// regularized lower incomplete gamma P(a,x) by series
inline double gser(double a, double x) {
  double gln = gammln(a), ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ++ap;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-14) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gln);
}

// regularized upper incomplete gamma Q(a,x) by Lentz continued fraction
inline double gcf(double a, double x) {
  double gln = gammln(a);
  double b = x + 1.0 - a, c = 1.0 / 1e-300, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

inline double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq domain");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gser(a, x) : gcf(a, x);
}

inline double chisq_pvalue(double chi2, int df) {
  return gammq(0.5 * df, 0.5 * chi2);
}

// goodness of fit of observed counts against given cell probabilities
inline double chisq_gof_pvalue(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& probs) {
  if (counts.size() != probs.size() || counts.size() < 2)
    throw std::invalid_argument("chisq_gof shape");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  double chi2 = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double e = probs[i] * total;
    if (e == 0.0) {
      if (counts[i] != 0) return 0.0;  // impossible cell observed
      continue;
    }
    double d = static_cast<double>(counts[i]) - e;
    chi2 += d * d / e;
    ++df;
  }
  if (df < 1) return 1.0;
  return chisq_pvalue(chi2, df);
}

// chi-square homogeneity of two count vectors over the same cells
inline double chisq_homogeneity_pvalue(const std::vector<std::uint64_t>& a,
                                       const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("homogeneity shape");
  double ta = 0.0, tb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ta += static_cast<double>(a[i]);
    tb += static_cast<double>(b[i]);
  }
  double grand = ta + tb, chi2 = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = static_cast<double>(a[i] + b[i]);
    if (row == 0.0) continue;
    double ea = row * ta / grand, eb = row * tb / grand;
    double da = static_cast<double>(a[i]) - ea, db = static_cast<double>(b[i]) - eb;
    chi2 += da * da / ea + db * db / eb;
    ++df;
  }
  if (df < 1) return 1.0;
  return chisq_pvalue(chi2, df);
}

inline double ks_q(double lambda) {
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    double term = sign * 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// two-sample Kolmogorov-Smirnov p-value
inline double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks2 empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  return ks_q((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace teststat
