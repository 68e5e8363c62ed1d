#include "bqcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bqcs/errors.hpp"

namespace bqcs {

DitherSpec DitherSpec::scaled(double delta) {
  if (delta < 0.0 || !std::isfinite(delta)) {
    throw domain_error("scaled dither requires delta >= 0, got " +
                       std::to_string(delta));
  }
  return {DitherMode::scaled, delta};
}

std::string to_string(const DitherSpec& d) {
  switch (d.mode) {
    case DitherMode::none:
      return "none";
    case DitherMode::uniform01:
      return "uniform01";
    case DitherMode::scaled:
      return "scaled:" + std::to_string(d.delta);
  }
  return "none";
}

DitherSpec dither_from_string(const std::string& s) {
  if (s == "none") return DitherSpec::none();
  if (s == "uniform01") return DitherSpec::uniform01();
  if (s.rfind("scaled:", 0) == 0) {
    try {
      return DitherSpec::scaled(std::stod(s.substr(7)));
    } catch (const domain_error&) {
      throw;
    } catch (const std::exception&) {
      throw domain_error("bad scaled dither value: " + s);
    }
  }
  throw domain_error("unknown dither mode: " + s +
                     " (expected none, uniform01 or scaled:<delta>)");
}

SensingEnsemble gen_ensemble(int64_t m, int64_t p, DitherSpec dither,
                             bool normalize, Seed seed) {
  if (m < 1 || p < 1) {
    throw shape_error("ensemble dims must be >= 1, got m=" + std::to_string(m) +
                      " p=" + std::to_string(p));
  }
  if (dither.mode == DitherMode::scaled && dither.delta < 0.0) {
    throw domain_error("scaled dither delta must be >= 0");
  }
  SensingEnsemble ens;
  ens.m_ = m;
  ens.p_ = p;
  ens.dither_mode_ = dither;
  ens.normalize_ = normalize;

  // Sub-stream 0 feeds phi, sub-stream 1 the dither, so turning the dither
  // on or off never changes phi for a fixed seed.
  SplitMix64 phi_rng(seed.derive(0));
  ens.phi_.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(p));
  for (double& x : ens.phi_) x = phi_rng.next_gaussian();
  if (normalize) {
    const double root_m = std::sqrt(static_cast<double>(m));
    for (double& x : ens.phi_) x /= root_m;
  }

  ens.dither_.assign(static_cast<std::size_t>(m), 0.0);
  if (dither.mode != DitherMode::none) {
    SplitMix64 dither_rng(seed.derive(1));
    const double scale =
        dither.mode == DitherMode::uniform01 ? 1.0 : dither.delta;
    for (double& x : ens.dither_) x = scale * dither_rng.next_uniform01();
  }

  ens.ref_ = EnsembleRef{"grm", m, p, dither, normalize, seed, 1.0};
  return ens;
}

SensingEnsemble identity_ensemble(int64_t p, double scale) {
  if (p < 1) throw shape_error("identity ensemble requires p >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw domain_error("identity ensemble scale must be > 0, got " +
                       std::to_string(scale));
  }
  SensingEnsemble ens;
  ens.m_ = p;
  ens.p_ = p;
  ens.dither_mode_ = DitherSpec::none();
  ens.normalize_ = false;
  ens.phi_.assign(static_cast<std::size_t>(p) * static_cast<std::size_t>(p),
                  0.0);
  for (int64_t i = 0; i < p; ++i)
    ens.phi_[static_cast<std::size_t>(i) * p + i] = scale;
  ens.dither_.assign(static_cast<std::size_t>(p), 0.0);
  ens.ref_ = EnsembleRef{"identity", p, p, DitherSpec::none(), false, Seed{},
                         scale};
  return ens;
}

SensingEnsemble regenerate(const EnsembleRef& ref) {
  if (ref.kind == "identity") return identity_ensemble(ref.p, ref.scale);
  if (ref.kind == "grm") {
    return gen_ensemble(ref.m, ref.p, ref.dither, ref.normalize, ref.seed);
  }
  throw domain_error("unknown ensemble kind: " + ref.kind);
}

Tensor measure(const SensingEnsemble& ens, const Tensor& w) {
  if (w.empty() || static_cast<int64_t>(w.size()) != ens.p()) {
    throw shape_error("measure: vector length " + std::to_string(w.size()) +
                      " does not match ensemble p=" + std::to_string(ens.p()));
  }
  std::vector<double> y(static_cast<std::size_t>(ens.m()));
  const double* phi = ens.phi().data();
  const double* x = w.data();
  const auto p = static_cast<std::size_t>(ens.p());
  for (std::size_t i = 0; i < y.size(); ++i) {
    double acc = 0.0;
    const double* row = phi + i * p;
    for (std::size_t j = 0; j < p; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  const std::size_t rows = y.size();
  return Tensor({rows}, std::move(y));
}

Tensor sparse_gaussian_probe(int64_t p, int64_t k, Seed seed) {
  if (k < 1 || k > p) {
    throw shape_error("sparse probe requires 1 <= k <= p, got k=" +
                      std::to_string(k) + " p=" + std::to_string(p));
  }
  SplitMix64 rng(seed);
  // Partial Fisher-Yates: the first k slots become the support.
  std::vector<int64_t> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), 0);
  for (int64_t i = 0; i < k; ++i) {
    const auto j =
        i + static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(p - i)));
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(j)]);
  }
  std::vector<double> x(static_cast<std::size_t>(p), 0.0);
  for (int64_t i = 0; i < k; ++i) {
    x[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] =
        rng.next_gaussian();
  }
  return Tensor({static_cast<std::size_t>(p)}, std::move(x));
}

namespace {

// Normalized operator A = phi / sqrt(m), materialized entrywise so that an
// identity ensemble pre-scaled by sqrt(m) yields A_ii = 1.0 exactly (x/x is
// exact in IEEE arithmetic) and the probe reports an exact zero.
std::vector<double> normalized_operator(const SensingEnsemble& ens) {
  std::vector<double> a = ens.phi();
  if (!ens.normalized()) {
    const double root_m = std::sqrt(static_cast<double>(ens.m()));
    for (double& v : a) v /= root_m;
  }
  return a;
}

double ratio_deviation(const std::vector<double>& a, int64_t m, int64_t p,
                       const Tensor& x) {
  // Support of x; zero entries contribute nothing.
  std::vector<std::size_t> support;
  double xx = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0) {
      support.push_back(j);
      xx += x[j] * x[j];
    }
  }
  if (support.empty() || xx == 0.0) {
    throw domain_error("rip probe vector is identically zero");
  }
  double yy = 0.0;
  for (int64_t i = 0; i < m; ++i) {
    const double* row = a.data() + static_cast<std::size_t>(i) * p;
    double acc = 0.0;
    for (std::size_t j : support) acc += row[j] * x[j];
    yy += acc * acc;
  }
  return std::abs(yy / xx - 1.0);
}

}  // namespace

double rip_delta(const SensingEnsemble& ens, std::span<const Tensor> probes) {
  const std::vector<double> a = normalized_operator(ens);
  double worst = 0.0;
  for (const Tensor& x : probes) {
    if (static_cast<int64_t>(x.size()) != ens.p()) {
      throw shape_error("rip probe length " + std::to_string(x.size()) +
                        " does not match p=" + std::to_string(ens.p()));
    }
    worst = std::max(worst, ratio_deviation(a, ens.m(), ens.p(), x));
  }
  return worst;
}

RipEstimate rip_probe(const SensingEnsemble& ens, int64_t k, int64_t trials,
                      Seed seed) {
  if (k < 1 || k > ens.p()) {
    throw shape_error("rip_probe requires 1 <= k <= p, got k=" +
                      std::to_string(k) + " p=" + std::to_string(ens.p()));
  }
  if (trials < 1) throw domain_error("rip_probe requires trials >= 1");
  const std::vector<double> a = normalized_operator(ens);
  double worst = 0.0;
  for (int64_t t = 0; t < trials; ++t) {
    const Tensor x = sparse_gaussian_probe(ens.p(), k, seed.derive(
                                                          static_cast<uint64_t>(t)));
    worst = std::max(worst, ratio_deviation(a, ens.m(), ens.p(), x));
  }
  return RipEstimate{k, worst, trials, seed};
}

namespace {

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(std::vector<double> g, int64_t n) {
  auto at = [&](int64_t r, int64_t c) -> double& {
    return g[static_cast<std::size_t>(r) * n + c];
  };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int64_t r = 0; r < n; ++r)
      for (int64_t c = r + 1; c < n; ++c) off += at(r, c) * at(r, c);
    if (off < 1e-30) break;
    for (int64_t r = 0; r < n; ++r) {
      for (int64_t c = r + 1; c < n; ++c) {
        if (at(r, c) == 0.0) continue;
        const double theta = (at(c, c) - at(r, r)) / (2.0 * at(r, c));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (int64_t j = 0; j < n; ++j) {
          const double grj = at(r, j), gcj = at(c, j);
          at(r, j) = cs * grj - sn * gcj;
          at(c, j) = sn * grj + cs * gcj;
        }
        for (int64_t j = 0; j < n; ++j) {
          const double gjr = at(j, r), gjc = at(j, c);
          at(j, r) = cs * gjr - sn * gjc;
          at(j, c) = sn * gjr + cs * gjc;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int64_t i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  return eig;
}

}  // namespace

double rip_exhaustive(const SensingEnsemble& ens, int64_t k) {
  const int64_t p = ens.p();
  if (p > 16 || k > 3 || k < 1) {
    throw domain_error(
        "rip_exhaustive is limited to p <= 16 and 1 <= k <= 3 (oracle mode)");
  }
  const std::vector<double> a = normalized_operator(ens);
  const int64_t m = ens.m();

  auto gram = [&](const std::vector<int64_t>& cols) {
    const int64_t n = static_cast<int64_t>(cols.size());
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int64_t r = 0; r < n; ++r) {
      for (int64_t c = r; c < n; ++c) {
        double acc = 0.0;
        for (int64_t i = 0; i < m; ++i) {
          acc += a[static_cast<std::size_t>(i) * p + cols[r]] *
                 a[static_cast<std::size_t>(i) * p + cols[c]];
        }
        g[static_cast<std::size_t>(r) * n + c] = acc;
        g[static_cast<std::size_t>(c) * n + r] = acc;
      }
    }
    return g;
  };

  double worst = 0.0;
  std::vector<int64_t> cols(static_cast<std::size_t>(k));
  // Enumerate all size-k supports.
  std::vector<int64_t> comb(static_cast<std::size_t>(k));
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    for (std::size_t i = 0; i < comb.size(); ++i) cols[i] = comb[i];
    const auto eig = symmetric_eigenvalues(gram(cols), k);
    for (double lambda : eig) worst = std::max(worst, std::abs(lambda - 1.0));
    // next combination
    int64_t i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == p - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int64_t j = i + 1; j < k; ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return worst;
}

}  // namespace bqcs
