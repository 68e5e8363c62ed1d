#include "bqcs/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bqcs/quantize.hpp"

namespace bqcs {

Tensor hard_threshold(const Tensor& x, int64_t k) {
  if (x.empty()) throw shape_error("hard_threshold: empty tensor");
  const auto p = static_cast<int64_t>(x.size());
  if (k < 1 || k > p) {
    throw shape_error("hard_threshold: k must be in [1, p], got k=" +
                      std::to_string(k) + " p=" + std::to_string(p));
  }
  if (k == p) return x;
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  // Sort by descending magnitude, lowest index first on ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::abs(x[a]) > std::abs(x[b]);
                   });
  std::vector<double> out(x.size(), 0.0);
  for (int64_t i = 0; i < k; ++i) {
    const std::size_t j = order[static_cast<std::size_t>(i)];
    out[j] = x[j];
  }
  return Tensor(x.shape(), std::move(out));
}

ReconResult pbp_reconstruct(const BitCode& code, const SensingEnsemble& ens,
                            int64_t k, double norm_hint, const Tensor* truth) {
  if (!ens.dither_free()) {
    throw domain_error(
        "pbp_reconstruct: decoding dithered codes is unsupported");
  }
  if (static_cast<int64_t>(code.length()) != ens.m()) {
    throw shape_error("pbp_reconstruct: code length " +
                      std::to_string(code.length()) +
                      " does not match ensemble m=" + std::to_string(ens.m()));
  }
  if (k < 1 || k > ens.p()) {
    throw shape_error("pbp_reconstruct: k must be in [1, p]");
  }
  if (!(norm_hint > 0.0) || !std::isfinite(norm_hint)) {
    throw domain_error("pbp_reconstruct: norm_hint must be > 0");
  }

  const auto m = static_cast<std::size_t>(ens.m());
  const auto p = static_cast<std::size_t>(ens.p());
  // Back-projection b = phi^T q, accumulated row-wise over the stored
  // row-major phi.
  std::vector<double> b(p, 0.0);
  const double* phi = ens.phi().data();
  for (std::size_t i = 0; i < m; ++i) {
    const double q = code.bit(i) ? 1.0 : -1.0;
    const double* row = phi + i * p;
    for (std::size_t j = 0; j < p; ++j) b[j] += q * row[j];
  }

  double lambda = std::sqrt(3.14159265358979323846 / 2.0) * norm_hint /
                  static_cast<double>(ens.m());
  if (ens.normalized()) {
    // phi already carries a 1/sqrt(m); fold it back into the calibration.
    lambda *= std::sqrt(static_cast<double>(ens.m()));
  }
  for (double& v : b) v *= lambda;

  ReconResult res;
  res.w_hat = hard_threshold(Tensor({p}, std::move(b)), k);
  res.k = k;
  res.m_over_p =
      static_cast<double>(ens.m()) / static_cast<double>(ens.p());

  if (truth != nullptr) {
    if (truth->size() != p) {
      throw shape_error("pbp_reconstruct: ground truth length mismatch");
    }
    double dot = 0.0, hh = 0.0, tt = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      dot += res.w_hat[j] * (*truth)[j];
      hh += res.w_hat[j] * res.w_hat[j];
      tt += (*truth)[j] * (*truth)[j];
    }
    if (hh > 0.0 && tt > 0.0) {
      res.cosine_similarity = dot / std::sqrt(hh * tt);
      const double c = dot / hh;  // optimal scalar alignment of w_hat onto w
      double err = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = (*truth)[j] - c * res.w_hat[j];
        err += d * d;
      }
      res.l2_error = std::sqrt(err);
    } else {
      res.cosine_similarity = 0.0;
      res.l2_error = std::sqrt(tt);
    }
  } else {
    res.cosine_similarity = std::numeric_limits<double>::quiet_NaN();
    res.l2_error = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

std::vector<ReconResult> recon_error_sweep(const Tensor& w, int64_t k,
                                           const std::vector<int64_t>& m_list,
                                           int64_t num_seeds, Seed base_seed) {
  if (m_list.empty()) throw domain_error("recon_error_sweep: empty m_list");
  if (!std::is_sorted(m_list.begin(), m_list.end())) {
    throw domain_error("recon_error_sweep: m_list must be ascending");
  }
  if (num_seeds < 1) throw domain_error("recon_error_sweep: need >= 1 seed");
  const auto p = static_cast<int64_t>(w.size());
  const double norm = l2_norm(w);

  std::vector<ReconResult> results;
  results.reserve(m_list.size() * static_cast<std::size_t>(num_seeds));
  for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
    for (int64_t t = 0; t < num_seeds; ++t) {
      const Seed s = base_seed.derive(mi).derive(static_cast<uint64_t>(t));
      const SensingEnsemble ens =
          gen_ensemble(m_list[mi], p, DitherSpec::none(), false, s);
      const BitCode code = qcs_quantize(w, ens);
      results.push_back(pbp_reconstruct(code, ens, k, norm, &w));
    }
  }
  return results;
}

}  // namespace bqcs
