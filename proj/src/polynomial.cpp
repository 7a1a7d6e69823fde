#include "tendon/polynomial.hpp"

#include "tendon/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace tendon {

namespace {

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

/// All exponent tuples over `dims` variables with total degree <= degree,
/// in a fixed deterministic order.
void enumerate_monomials(int dims, int degree, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dims) {
    out.push_back(current);
    return;
  }
  int used = 0;
  for (int e : current) used += e;
  for (int e = 0; e + used <= degree; ++e) {
    current.push_back(e);
    enumerate_monomials(dims, degree, current, out);
    current.pop_back();
  }
}

double power(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double LengthPolynomial::value(const VecX& theta, bool* extrapolated) const {
  if (extrapolated) *extrapolated = false;
  double sum = 0.0;
  const int k = static_cast<int>(joints.size());
  VecX x(k);
  for (int i = 0; i < k; ++i) {
    double raw = theta[joints[i]];
    x[i] = clamp(raw, domain_lower[i], domain_upper[i]);
    if (extrapolated && x[i] != raw) *extrapolated = true;
  }
  for (size_t t = 0; t < exponents.size(); ++t) {
    double term = coefficients[static_cast<int>(t)];
    for (int i = 0; i < k; ++i) term *= power(x[i], exponents[t][i]);
    sum += term;
  }
  return sum;
}

VecX LengthPolynomial::gradient(const VecX& theta, bool* extrapolated) const {
  if (extrapolated) *extrapolated = false;
  const int k = static_cast<int>(joints.size());
  VecX x(k);
  for (int i = 0; i < k; ++i) {
    double raw = theta[joints[i]];
    x[i] = clamp(raw, domain_lower[i], domain_upper[i]);
    if (extrapolated && x[i] != raw) *extrapolated = true;
  }
  VecX grad = VecX::Zero(k);
  for (size_t t = 0; t < exponents.size(); ++t) {
    const std::vector<int>& exp = exponents[t];
    for (int d = 0; d < k; ++d) {
      if (exp[d] == 0) continue;
      double term = coefficients[static_cast<int>(t)] * exp[d] * power(x[d], exp[d] - 1);
      for (int i = 0; i < k; ++i) {
        if (i == d) continue;
        term *= power(x[i], exp[i]);
      }
      grad[d] += term;
    }
  }
  return grad;
}

std::vector<int> detect_involved_joints(const MusculoskeletalModel& model, int muscle,
                                        double probe_step, double tolerance, int bases) {
  if (probe_step <= 0.0) throw ValidationError("probe step must be positive");
  if (bases < 1) throw ValidationError("need at least one probe posture");
  const KinematicTree& tree = model.tree();
  const int n = tree.joint_count();
  VecX lo = tree.lower_limits();
  VecX hi = tree.upper_limits();

  // Seeded from the muscle index so involvement (and everything fitted on
  // top of it) is reproducible run to run.
  Rng rng(0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(muscle));

  std::vector<int> involved;
  std::vector<bool> hit(n, false);
  for (int b = 0; b < bases; ++b) {
    VecX base(n);
    for (int j = 0; j < n; ++j) {
      double span = hi[j] - lo[j];
      double margin = std::min(probe_step, 0.45 * span);
      base[j] = rng.uniform(lo[j] + margin, hi[j] - margin);
    }
    double l0 = model.muscle_lengths(base)[muscle];
    for (int j = 0; j < n; ++j) {
      if (hit[j]) continue;
      double span = hi[j] - lo[j];
      double step = std::min(probe_step, 0.45 * span);
      if (step <= 0.0) continue;  // locked joint
      VecX probe = base;
      probe[j] = base[j] + step;
      double lp = model.muscle_lengths(probe)[muscle];
      probe[j] = base[j] - step;
      double lm = model.muscle_lengths(probe)[muscle];
      if (std::abs(lp - l0) > tolerance || std::abs(lm - l0) > tolerance) hit[j] = true;
    }
  }
  for (int j = 0; j < n; ++j)
    if (hit[j]) involved.push_back(j);
  return involved;
}

LengthPolynomial fit_length_polynomial(const MusculoskeletalModel& model, int muscle,
                                       const FitOptions& options) {
  if (options.degree < 1) throw ValidationError("fit degree must be >= 1");
  if (options.samples_per_joint < 2) throw ValidationError("need >= 2 samples per joint");
  if (muscle < 0 || muscle >= model.muscle_count())
    throw ValidationError("fit: no muscle index " + std::to_string(muscle));

  const KinematicTree& tree = model.tree();
  LengthPolynomial poly;
  poly.muscle = muscle;
  poly.degree = options.degree;
  poly.joints = detect_involved_joints(model, muscle, options.probe_step,
                                       options.probe_tolerance, options.probe_bases);
  const int k = static_cast<int>(poly.joints.size());

  poly.domain_lower.resize(k);
  poly.domain_upper.resize(k);
  for (int i = 0; i < k; ++i) {
    const Link& jl = tree.joint_link(poly.joints[i]);
    double span = jl.upper_limit - jl.lower_limit;
    poly.domain_lower[i] = jl.lower_limit + 0.5 * options.domain_shrink * span;
    poly.domain_upper[i] = jl.upper_limit - 0.5 * options.domain_shrink * span;
  }

  // Rigid w.r.t. every joint: a single constant term.
  if (k == 0) {
    VecX mid = 0.5 * (tree.lower_limits() + tree.upper_limits());
    poly.exponents = {{}};
    poly.coefficients = VecX::Constant(1, model.muscle_lengths(mid)[muscle]);
    poly.degree = 0;
    poly.residual_rms = 0.0;
    return poly;
  }

  std::vector<int> scratch;
  enumerate_monomials(k, options.degree, scratch, poly.exponents);
  const int terms = static_cast<int>(poly.exponents.size());

  // Regular grid over the involved joints, shrunk per joint so the total
  // stays under the cap (polyarticular muscles would otherwise explode).
  int spj = options.samples_per_joint;
  while (spj > options.degree + 1 && std::pow(spj, k) > options.max_total_samples) --spj;
  long total = 1;
  for (int i = 0; i < k; ++i) total *= spj;
  if (total < terms)
    throw ValidationError("fit of muscle '" + model.muscle(muscle).name + "': grid of " +
                          std::to_string(total) + " samples cannot determine " +
                          std::to_string(terms) + " polynomial terms");

  VecX mid = 0.5 * (tree.lower_limits() + tree.upper_limits());
  MatX design(total, terms);
  VecX rhs(total);
  VecX weight(total);
  std::vector<int> index(k, 0);
  VecX theta = mid;
  for (long s = 0; s < total; ++s) {
    VecX x(k);
    double w = 1.0;
    for (int i = 0; i < k; ++i) {
      double t = (spj == 1) ? 0.5 : static_cast<double>(index[i]) / (spj - 1);
      x[i] = poly.domain_lower[i] + t * (poly.domain_upper[i] - poly.domain_lower[i]);
      theta[poly.joints[i]] = x[i];
      // Chebyshev-flavored weight: boosting boundary samples keeps the
      // derivative error flat out to the domain edges instead of letting it
      // balloon there, as plain uniform least squares does.
      double u = 2.0 * t - 1.0;
      w *= std::pow(1.02 - u * u, -0.25);
    }
    weight[s] = w;
    rhs[s] = w * model.muscle_lengths(theta)[muscle];
    for (int t = 0; t < terms; ++t) {
      double v = w;
      for (int i = 0; i < k; ++i) v *= power(x[i], poly.exponents[t][i]);
      design(s, t) = v;
    }
    for (int i = k - 1; i >= 0; --i) {
      if (++index[i] < spj) break;
      index[i] = 0;
    }
  }

  // Column equilibration keeps the QR well conditioned for wide domains.
  VecX scale(terms);
  for (int t = 0; t < terms; ++t) {
    double norm = design.col(t).norm();
    scale[t] = (norm > 0.0) ? 1.0 / norm : 1.0;
    design.col(t) *= scale[t];
  }
  Eigen::ColPivHouseholderQR<MatX> qr(design);
  if (qr.rank() < terms)
    throw ValidationError("fit of muscle '" + model.muscle(muscle).name +
                          "': rank-deficient design (rank " + std::to_string(qr.rank()) +
                          " of " + std::to_string(terms) + "); enlarge the sample grid");
  VecX solution = qr.solve(rhs);
  poly.coefficients = solution.cwiseProduct(scale);
  // Residual of the unweighted problem.
  for (int t = 0; t < terms; ++t) design.col(t) /= scale[t];
  VecX residual = (design * poly.coefficients - rhs).cwiseQuotient(weight);
  poly.residual_rms = std::sqrt(residual.squaredNorm() / total);
  return poly;
}

std::vector<LengthPolynomial> fit_all_muscles(const MusculoskeletalModel& model,
                                              const FitOptions& options) {
  std::vector<LengthPolynomial> polys;
  polys.reserve(model.muscle_count());
  for (int i = 0; i < model.muscle_count(); ++i)
    polys.push_back(fit_length_polynomial(model, i, options));
  return polys;
}

VecX polynomial_lengths(const std::vector<LengthPolynomial>& polys, const VecX& theta) {
  VecX lengths(static_cast<int>(polys.size()));
  for (size_t i = 0; i < polys.size(); ++i) lengths[static_cast<int>(i)] = polys[i].value(theta);
  return lengths;
}

MuscleJacobian jacobian_from_polynomials(const std::vector<LengthPolynomial>& polys,
                                         const VecX& theta, int joint_count) {
  MuscleJacobian jac;
  jac.theta = theta;
  jac.g = MatX::Zero(static_cast<int>(polys.size()), joint_count);
  for (size_t i = 0; i < polys.size(); ++i) {
    const LengthPolynomial& p = polys[i];
    if (p.muscle != static_cast<int>(i))
      throw ValidationError("polynomial list is not ordered by muscle index");
    bool clamped = false;
    VecX grad = p.gradient(theta, &clamped);
    if (clamped) jac.extrapolated = true;
    for (size_t d = 0; d < p.joints.size(); ++d)
      jac.g(static_cast<int>(i), p.joints[d]) = grad[static_cast<int>(d)];
  }
  return jac;
}

}  // namespace tendon
