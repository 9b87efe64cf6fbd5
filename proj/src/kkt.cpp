#include "nif/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nif/polytope.hpp"

namespace nif {

KktCertificate build_kkt_certificate(const Instance& inst, const FlowRate& fr,
                                     double tol, const CheckConfig& cfg) {
  ConditionReport rep = check_opt_conditions(inst, fr, tol, cfg);
  if (!rep.passed())
    throw CertificateError(
        "build_kkt_certificate: point fails the optimality conditions",
        std::move(rep));

  const int ns = inst.num_sources();
  const int nt = inst.num_terminals();
  const Eigen::MatrixXd loads = edge_loads(inst, fr);

  KktCertificate cert;
  cert.mu.resize(inst.paths.num_paths());
  cert.lambda.resize(ns, nt);
  cert.h.resize(ns, nt);
  cert.nu.resize(nt);
  cert.pi.resize(nt);

  Eigen::VectorXd diff(inst.paths.num_paths());
  for (int p = 0; p < inst.paths.num_paths(); ++p)
    diff[p] = differential_path_cost(inst, loads, p);

  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      double lam = std::numeric_limits<double>::infinity();
      for (int p : inst.paths.by_pair(s, t)) lam = std::min(lam, diff[p]);
      cert.lambda(s, t) = lam;
      cert.h(s, t) = source_derivative(inst, fr, s, t) + lam;
    }
  }
  for (int p = 0; p < inst.paths.num_paths(); ++p) {
    const Path& path = inst.paths.path(p);
    cert.mu[p] = diff[p] - cert.lambda(path.source, path.terminal);
  }

  for (int t = 0; t < nt; ++t) {
    std::vector<int> order(ns);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return cert.h(a, t) < cert.h(b, t);
    });
    cert.pi[t] = order;
    Subset suffix = full_set(ns);
    double prev = 0.0;
    for (int i = 0; i < ns; ++i) {
      const double inc = cert.h(order[i], t) - prev;
      if (inc != 0.0) cert.nu[t][suffix] = inc;
      prev = cert.h(order[i], t);
      suffix &= ~singleton(order[i]);
    }
  }
  return cert;
}

CertificateReport verify_certificate(const Instance& inst, const FlowRate& fr,
                                     const KktCertificate& cert) {
  const int ns = inst.num_sources();
  const int nt = inst.num_terminals();
  const Eigen::MatrixXd loads = edge_loads(inst, fr);
  CertificateReport rep;

  for (int p = 0; p < inst.paths.num_paths(); ++p) {
    const Path& path = inst.paths.path(p);
    const double diff = differential_path_cost(inst, loads, p);
    rep.stationarity_flow =
        std::max(rep.stationarity_flow,
                 std::abs(diff - cert.mu[p] -
                          cert.lambda(path.source, path.terminal)));
    rep.slackness_mu =
        std::max(rep.slackness_mu, std::abs(cert.mu[p] * fr.path_flows[p]));
    rep.dual_negativity = std::max(rep.dual_negativity, -cert.mu[p]);
  }

  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      double nu_sum = 0.0;
      for (const auto& [a, v] : cert.nu[t])
        if (contains(a, s)) nu_sum += v;
      rep.stationarity_rate =
          std::max(rep.stationarity_rate,
                   std::abs(source_derivative(inst, fr, s, t) +
                            cert.lambda(s, t) - nu_sum));
      double cover = 0.0;
      for (int p : inst.paths.by_pair(s, t)) cover += fr.path_flows[p];
      rep.slackness_lambda =
          std::max(rep.slackness_lambda,
                   std::abs(cert.lambda(s, t) * (fr.rates(s, t) - cover)));
      rep.dual_negativity = std::max(rep.dual_negativity, -cert.lambda(s, t));
    }
    for (const auto& [a, v] : cert.nu[t]) {
      double sum = 0.0;
      for (int s = 0; s < ns; ++s)
        if (contains(a, s)) sum += fr.rates(s, t);
      rep.slackness_nu =
          std::max(rep.slackness_nu,
                   std::abs(v * (sum - inst.entropy.conditional_entropy(a))));
      rep.dual_negativity = std::max(rep.dual_negativity, -v);
    }
  }
  rep.dual_negativity = std::max(rep.dual_negativity, 0.0);
  rep.max_residual =
      std::max({rep.stationarity_flow, rep.stationarity_rate, rep.slackness_mu,
                rep.slackness_lambda, rep.slackness_nu, rep.dual_negativity});
  return rep;
}

TriState greedy_prefix_check(const Instance& inst, const FlowRate& fr,
                             const KktCertificate& cert, double tol) {
  const int ns = inst.num_sources();
  const int nt = inst.num_terminals();
  for (int t = 0; t < nt; ++t) {
    const auto& order = cert.pi[t];
    if (cert.h(order[0], t) <= tol) return TriState::Indeterminate;
    for (int i = 0; i + 1 < ns; ++i)
      if (cert.h(order[i + 1], t) - cert.h(order[i], t) <= tol)
        return TriState::Indeterminate;
  }
  for (int t = 0; t < nt; ++t) {
    Subset prefix = 0;
    double sum = 0.0;
    for (int i = 0; i < ns; ++i) {
      prefix |= singleton(cert.pi[t][i]);
      sum += fr.rates(cert.pi[t][i], t);
      if (std::abs(sum - inst.entropy.entropy(prefix)) > tol)
        return TriState::False;
    }
  }
  return TriState::True;
}

}  // namespace nif
