#pragma once

// Canonical forms on the frame bundle, their invariance, the structure
// identities between them, and the affine/projective connection cocycles.

#include <map>
#include <string>
#include <vector>

#include "folcc/diffeo.hpp"
#include "folcc/forms.hpp"
#include "folcc/jet.hpp"

namespace folcc {

/// Closed-form θ_k (k ≤ 3) in y-coordinates of a frame bundle of order ≥ k+1.
forms::CoordForm theta(int k, int order);

/// θ_k(τ) at `frame` from the Gelfand-Kazhdan recipe: τ is a y-chart tangent
/// vector and the derivative along the curve y + uτ is taken exactly with dual
/// numbers. Needs k ≤ frame.order() − 1.
double theta_numeric(int k, const Jet<double>& frame, const std::vector<double>& tangent);

/// max over coordinate directions τ of |θ_k(h̃_*τ) − θ_k(τ)| / max(1, |θ_k(τ)|),
/// with h̃ the prolongation of h. The frame's order must be ≥ k+1.
double check_invariance(const LocalDiffeo& h, int k, const Jet<double>& frame);

struct IdentityResult {
  std::string name;
  std::string statement;
  bool holds = false;
  std::string difference;  // symbolic lhs − rhs
};

/// The exact identity suite between θ₀..θ₃, gvl and cl₁, in both charts.
std::vector<IdentityResult> structure_identities();

/// Parses x-chart forms: sums of terms like "3/2*x2^2*dx1^dx0", "-theta0^theta1^theta2".
/// θ's are pulled back to the x-chart; `order` is the ambient jet order.
forms::CoordForm parse_x_form(const std::string& spec, int order = 4);

// ---------------------------------------------------------------------------
// Connections.

enum class ConnectionKind { affine, projective };

struct ConnectionCandidate {
  ConnectionKind kind = ConnectionKind::affine;
  /// Christoffel function T_w (affine) or q_w (projective) per chart name.
  std::map<std::string, ExprAst> per_chart;
};

struct SampleSpec {
  int samples = 256;
  double trim = 0.01;  // fraction cut from each end of the interval
};

struct GeneratorResidual {
  std::string generator;
  double max_residual = 0.0;
  double worst_point = 0.0;
  int evaluated = 0;
  std::vector<std::string> errors;  // per-sample domain errors
};

struct ConnectionReport {
  ConnectionKind kind = ConnectionKind::affine;
  double tolerance = 1e-8;
  double max_residual = 0.0;
  bool pass = false;
  std::vector<GeneratorResidual> generators;
};

/// Residual of the cocycle for generator φ at w. Affine:
///   T_t(φ(w)) + φ″/φ′² − T_w(w)/φ′;  projective: q_t(φ(w))·φ′² − q_w(w) + S(φ)(w).
double cocycle_residual(ConnectionKind kind, const LocalDiffeo& phi, const ExprAst& source, const ExprAst& target,
                        double w);

ConnectionReport verify_connection(const PseudogroupPresentation& pres, const ConnectionCandidate& cand,
                                   const SampleSpec& grid = {}, double tol = 1e-8);

namespace reference {
/// Single-threaded sweep over the same grid.
ConnectionReport verify_connection(const PseudogroupPresentation& pres, const ConnectionCandidate& cand,
                                   const SampleSpec& grid = {}, double tol = 1e-8);
}  // namespace reference

/// T = F″/F′ for a conjugacy F of the generators to translations, assigned to every chart.
/// Only explicit (or lift) F are accepted since the derivative is taken symbolically.
ConnectionCandidate connection_from_conjugacy(const LocalDiffeo& f, const std::vector<std::string>& charts);

/// S(h)(w) = h‴/h′ − (3/2)(h″/h′)².
double schwarzian(const LocalDiffeo& h, double w);

}  // namespace folcc
