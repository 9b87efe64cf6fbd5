#pragma once

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <vector>

#include "nif/conditions.hpp"
#include "nif/instance.hpp"

namespace nif {

struct CertificateError : std::runtime_error {
  CertificateError(const std::string& what, ConditionReport rep)
      : std::runtime_error(what), report(std::move(rep)) {}
  ConditionReport report;
};

/// Dual variables witnessing optimality: lambda per (source, terminal) on
/// the flow-cover constraints, mu per path, nu per (subset, terminal) on
/// the rate inequalities. nu is supported, per terminal, on the nested
/// chain of suffix sets of the h-ascending permutation pi.
struct KktCertificate {
  Eigen::MatrixXd lambda;               // N_S x N_T, >= 0
  Eigen::VectorXd mu;                   // per path, >= 0
  std::vector<std::map<Subset, double>> nu;  // per terminal, >= 0
  Eigen::MatrixXd h;                    // h_{s,t} = d'y' + lambda
  std::vector<std::vector<int>> pi;     // per terminal, sources by h asc
};

/// Builds the certificate by the constructive recipe: lambda = min
/// differential path cost, mu = differential cost - lambda, nu the
/// h-difference chain. Requires the point to pass check_opt_conditions at
/// tol; throws CertificateError carrying the failed report otherwise.
KktCertificate build_kkt_certificate(const Instance& inst, const FlowRate& fr,
                                     double tol = 1e-8,
                                     const CheckConfig& cfg = {});

struct CertificateReport {
  double stationarity_flow = 0.0;   // |sum c'z' - mu - lambda|
  double stationarity_rate = 0.0;   // |d'y' + lambda - sum nu|
  double slackness_mu = 0.0;        // |mu_P f_P|
  double slackness_lambda = 0.0;    // |lambda (R - sum f)|
  double slackness_nu = 0.0;        // |nu (sum R - g(A))|
  double dual_negativity = 0.0;     // max(0, -min multiplier)
  double max_residual = 0.0;
};

/// Max absolute residual over both stationarity equations, the three
/// complementary-slackness families, and dual feasibility.
CertificateReport verify_certificate(const Instance& inst, const FlowRate& fr,
                                     const KktCertificate& cert);

enum class TriState { True, False, Indeterminate };

/// Checks the greedy prefix structure of optimal rates: per terminal, with
/// sources ordered by strictly increasing positive h, every prefix rate sum
/// equals the joint entropy of the prefix. Indeterminate when the h values
/// are not strictly ordered (tie within tol) or not strictly positive.
TriState greedy_prefix_check(const Instance& inst, const FlowRate& fr,
                             const KktCertificate& cert, double tol = 1e-6);

}  // namespace nif
