#include "qlinz/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qlinz {
namespace {

bool less_complex(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool close(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
}

struct Cluster {
  Complex sum{0.0};
  int count = 0;
  bool exact = false;
  std::string exact_text;
  Complex mean() const { return sum / static_cast<double>(count); }
};

std::vector<SpectralValue> cluster(std::vector<SpectralValue> in, double tol) {
  std::sort(in.begin(), in.end(), [](const auto& x, const auto& y) {
    return less_complex(x.value, y.value);
  });
  std::vector<Cluster> clusters;
  for (const auto& v : in) {
    bool merged = false;
    for (auto& c : clusters) {
      // Exact values only merge with an identical exact value.
      if (c.exact != v.exact) continue;
      if (c.exact ? c.exact_text == v.exact_text : close(c.mean(), v.value, tol)) {
        c.sum += v.value * static_cast<double>(v.multiplicity);
        c.count += v.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) {
      clusters.push_back({v.value * static_cast<double>(v.multiplicity),
                          v.multiplicity, v.exact, v.exact_text});
    }
  }
  // Merging moves cluster means; repeat until the clusters are separated.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < clusters.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < clusters.size() && !changed; ++j) {
        if (clusters[i].exact || clusters[j].exact) continue;
        if (close(clusters[i].mean(), clusters[j].mean(), tol)) {
          clusters[i].sum += clusters[j].sum;
          clusters[i].count += clusters[j].count;
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  std::vector<SpectralValue> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) {
    out.push_back({c.mean(), c.count, c.exact, c.exact_text});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return less_complex(x.value, y.value);
  });
  return out;
}

// Kuhn's augmenting-path matching restricted to edges with cost <= limit.
bool try_augment(std::size_t u, const std::vector<std::vector<double>>& cost,
                 double limit, std::vector<char>& seen,
                 std::vector<std::ptrdiff_t>& match_of_b) {
  for (std::size_t v = 0; v < cost[u].size(); ++v) {
    if (cost[u][v] > limit || seen[v]) continue;
    seen[v] = 1;
    if (match_of_b[v] < 0 ||
        try_augment(static_cast<std::size_t>(match_of_b[v]), cost, limit, seen,
                    match_of_b)) {
      match_of_b[v] = static_cast<std::ptrdiff_t>(u);
      return true;
    }
  }
  return false;
}

bool perfect_matching(const std::vector<std::vector<double>>& cost, double limit,
                      std::vector<std::ptrdiff_t>& match_of_b) {
  const std::size_t n = cost.size();
  match_of_b.assign(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<char> seen(n, 0);
    if (!try_augment(u, cost, limit, seen, match_of_b)) return false;
  }
  return true;
}

}  // namespace

std::string to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::eigen: return "eigen";
    case SpectrumMethod::pencil: return "pencil";
    case SpectrumMethod::flat_adjoint: return "flat_adjoint";
    case SpectrumMethod::smf: return "smf";
    case SpectrumMethod::kalman_theorem: return "kalman_theorem";
    case SpectrumMethod::minimal: return "minimal";
  }
  return "unknown";
}

Spectrum::Spectrum(std::vector<Complex> raw, double tol, SpectrumMethod method)
    : tol_(tol), method_(method) {
  std::vector<SpectralValue> values;
  values.reserve(raw.size());
  for (Complex z : raw) values.push_back({z, 1, false, {}});
  values_ = cluster(std::move(values), tol);
}

Spectrum::Spectrum(std::vector<SpectralValue> values, double tol,
                   SpectrumMethod method)
    : values_(cluster(std::move(values), tol)), tol_(tol), method_(method) {}

std::size_t Spectrum::size() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += static_cast<std::size_t>(v.multiplicity);
  return n;
}

std::vector<Complex> Spectrum::expanded() const {
  std::vector<Complex> out;
  out.reserve(size());
  for (const auto& v : values_) {
    for (int k = 0; k < v.multiplicity; ++k) out.push_back(v.value);
  }
  return out;
}

MultisetMatch match_multisets(std::span<const Complex> a,
                              std::span<const Complex> b, double tol) {
  MultisetMatch result;
  if (a.size() != b.size()) {
    result.max_discrepancy = std::numeric_limits<double>::infinity();
    return result;
  }
  const std::size_t n = a.size();
  if (n == 0) {
    result.matched = true;
    return result;
  }
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  std::vector<double> levels;
  levels.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[i][j] = std::abs(a[i] - b[j]) / std::max(1.0, std::abs(b[j]));
      levels.push_back(cost[i][j]);
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // Binary search the smallest bottleneck admitting a perfect matching.
  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;
  std::vector<std::ptrdiff_t> match_of_b;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (perfect_matching(cost, levels[mid], match_of_b)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  perfect_matching(cost, levels[lo], match_of_b);
  result.max_discrepancy = levels[lo];
  result.matched = result.max_discrepancy <= tol;
  for (std::size_t j = 0; j < n; ++j) {
    result.pairs.emplace_back(static_cast<std::size_t>(match_of_b[j]), j);
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

MultisetMatch match_spectra(const Spectrum& a, const Spectrum& b, double tol) {
  const auto ea = a.expanded();
  const auto eb = b.expanded();
  return match_multisets(ea, eb, tol);
}

std::vector<Complex> negated_conjugates(std::span<const Complex> values) {
  std::vector<Complex> out;
  out.reserve(values.size());
  for (Complex z : values) out.push_back(-std::conj(z));
  return out;
}

std::string format_complex(Complex z, int significant_digits) {
  auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
  const double re = clean(z.real());
  const double im = clean(z.imag());
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*g%c%.*gi", significant_digits, re,
                std::signbit(im) ? '-' : '+', significant_digits, std::abs(im));
  return buf;
}

}  // namespace qlinz
