#include "ais/idionet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ais::idionet {
namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw std::domain_error(std::string(what) + ": non-finite value");
}

void require_column(const Matrix& P, std::size_t v, const char* what) {
  if (v >= static_cast<std::size_t>(P.cols())) {
    throw std::out_of_range(std::string(what) + ": antigen index " + std::to_string(v) +
                            " out of range");
  }
}

void require_same_shape(const Matrix& P, const Matrix& I, const Matrix& X, std::size_t r,
                        const char* what) {
  if (P.rows() != I.rows() || P.rows() != X.rows() || P.cols() != I.cols() ||
      P.cols() != X.cols()) {
    throw std::invalid_argument(std::string(what) + ": P, I and X must share dimensions");
  }
  if (r >= static_cast<std::size_t>(P.rows())) {
    throw std::out_of_range(std::string(what) + ": antigenic index out of range");
  }
}

void check_dimensions(const Vector& x, const Vector& y, const MatchMatrices& m) {
  const auto n_ab = x.size();
  if (m.antibody.rows() != n_ab || m.antibody.cols() != n_ab) {
    throw std::invalid_argument("farmer: antibody match matrix must be N x N");
  }
  if (m.antigen.rows() != y.size() || (y.size() > 0 && m.antigen.cols() != n_ab)) {
    throw std::invalid_argument("farmer: antigen match matrix must be n x N");
  }
}

}  // namespace

void FarmerParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("FarmerParams: c must be > 0");
  if (!(k1 >= 0.0)) throw std::invalid_argument("FarmerParams: k1 must be >= 0");
  if (!(k2 >= 0.0)) throw std::invalid_argument("FarmerParams: k2 must be >= 0");
  if (!(dt >= 0.0)) throw std::invalid_argument("FarmerParams: dt must be >= 0");
  if (!std::isfinite(squash_theta)) throw std::invalid_argument("FarmerParams: theta must be finite");
}

MatchMatrices build_match_matrix(const std::vector<NetworkAntibody>& antibodies,
                                 const std::vector<AntigenPattern>& antigens,
                                 const MatchConfig& cfg) {
  const auto n_ab = static_cast<Eigen::Index>(antibodies.size());
  const auto n_ag = static_cast<Eigen::Index>(antigens.size());
  MatchMatrices m{Matrix::Zero(n_ab, n_ab), Matrix::Zero(n_ag, n_ab)};
  for (Eigen::Index i = 0; i < n_ab; ++i) {
    const auto& paratope = antibodies[static_cast<std::size_t>(i)].paratope;
    for (Eigen::Index j = 0; j < n_ab; ++j) {
      m.antibody(j, i) =
          total_reaction(paratope, antibodies[static_cast<std::size_t>(j)].epitope, cfg);
    }
    for (Eigen::Index j = 0; j < n_ag; ++j) {
      m.antigen(j, i) =
          total_reaction(paratope, antigens[static_cast<std::size_t>(j)].epitope, cfg);
    }
  }
  return m;
}

FarmerTerms farmer_terms(const Vector& x, const Vector& y, const MatchMatrices& m,
                         const FarmerParams& params) {
  check_dimensions(x, y, m);
  require_finite(x, "farmer_derivative");
  require_finite(y, "farmer_derivative");
  FarmerTerms t;
  const Vector antigen_drive =
      y.size() > 0 ? Vector(m.antigen.transpose() * y) : Vector::Zero(x.size());
  t.antigen_stimulation = x.cwiseProduct(antigen_drive);
  t.suppression = params.k1 * x.cwiseProduct(m.antibody * x);
  t.stimulation = x.cwiseProduct(m.antibody.transpose() * x);
  t.damping = params.k2 * x;
  return t;
}

Vector farmer_derivative(const Vector& x, const Vector& y, const MatchMatrices& m,
                         const FarmerParams& params) {
  const auto t = farmer_terms(x, y, m, params);
  return params.c * (t.antigen_stimulation - t.suppression + t.stimulation) - t.damping;
}

double squash(double raw, double theta) {
  const double s = 1.0 / (1.0 + std::exp(theta - raw));
  return std::clamp(s, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

Vector euler_update(const NetworkState& state, const FarmerParams& params) {
  params.validate();
  Vector raw = state.x + params.dt * farmer_derivative(state.x, state.y, state.m, params);
  require_finite(raw, "step");
  return raw;
}

NetworkState step(const NetworkState& state, const FarmerParams& params) {
  NetworkState next = state;
  next.x = euler_update(state, params).unaryExpr([&](double v) {
    return squash(v, params.squash_theta);
  });
  return next;
}

std::size_t select_by_concentration(const Vector& x) {
  if (x.size() == 0) throw std::invalid_argument("select_by_concentration: empty network");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (x(i) > x(best)) best = i;
  }
  return static_cast<std::size_t>(best);
}

void AffinityMatrices::validate() const {
  if (P.rows() != I.rows() || P.rows() != X.rows() || P.cols() != I.cols() ||
      P.cols() != X.cols()) {
    throw std::invalid_argument("AffinityMatrices: P, I and X must share dimensions");
  }
  auto in_unit = [](const Matrix& M) {
    return M.allFinite() && (M.size() == 0 || (M.minCoeff() >= 0.0 && M.maxCoeff() <= 1.0));
  };
  if (!in_unit(P) || !in_unit(I)) {
    throw std::invalid_argument("AffinityMatrices: P and I entries must lie in [0, 1]");
  }
  if (!X.allFinite()) throw std::invalid_argument("AffinityMatrices: X must be finite");
}

std::size_t select_antigenic(const Matrix& P, std::size_t v) {
  require_column(P, v, "select_antigenic");
  if (P.rows() == 0) throw std::invalid_argument("select_antigenic: no antibodies");
  const auto col = static_cast<Eigen::Index>(v);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < P.rows(); ++i) {
    if (P(i, col) > P(best, col)) best = i;
  }
  return static_cast<std::size_t>(best);
}

Vector stimulation(const Matrix& P, const Matrix& I, const Matrix& X, std::size_t r,
                   std::size_t v, IdiotopeIndex index) {
  require_same_shape(P, I, X, r, "stimulation");
  require_column(P, v, "stimulation");
  const auto rr = static_cast<Eigen::Index>(r);
  Vector eps = Vector::Zero(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const Eigen::Index idiotope_row = index == IdiotopeIndex::Antigenic ? rr : i;
    double sum = 0.0;
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      sum += (1.0 - P(i, j)) * I(idiotope_row, j) * X(i, j) * X(rr, j);
    }
    eps(i) = sum;
  }
  return eps;
}

Vector suppression(const Matrix& P, const Matrix& I, const Matrix& X, std::size_t r,
                   std::size_t v, double k1) {
  require_same_shape(P, I, X, r, "suppression");
  require_column(P, v, "suppression");
  const auto rr = static_cast<Eigen::Index>(r);
  Vector delta = Vector::Zero(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      sum += P(rr, j) * I(i, j) * X(i, j) * X(rr, j);
    }
    delta(i) = k1 * sum;
  }
  return delta;
}

Matrix update_affinity(const Matrix& P, const Vector& eps, const Vector& delta, std::size_t v) {
  require_column(P, v, "update_affinity");
  if (eps.size() != P.rows() || delta.size() != P.rows()) {
    throw std::invalid_argument("update_affinity: eps/delta length must equal the number of rows");
  }
  Matrix out = P;
  const auto col = static_cast<Eigen::Index>(v);
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    out(i, col) = std::clamp(P(i, col) + eps(i) - delta(i), 0.0, 1.0);
  }
  return out;
}

ActivationChoice select_by_activation(const Vector& x, const Matrix& P, std::size_t v) {
  return select_by_activation(x, P, v, select_antigenic(P, v));
}

ActivationChoice select_by_activation(const Vector& x, const Matrix& P, std::size_t v,
                                      std::size_t antigenic) {
  if (x.size() == 0 || P.rows() == 0) throw std::invalid_argument("select_by_activation: empty");
  if (x.size() != P.rows()) {
    throw std::invalid_argument("select_by_activation: concentration/paratope size mismatch");
  }
  require_column(P, v, "select_by_activation");
  const auto col = static_cast<Eigen::Index>(v);
  Eigen::Index best = 0;
  double best_activation = x(0) * P(0, col);
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double a = x(i) * P(i, col);
    if (a > best_activation) {
      best_activation = a;
      best = i;
    }
  }
  ActivationChoice choice;
  choice.selected = static_cast<std::size_t>(best);
  choice.antigenic = antigenic;
  choice.idiotypic_difference = choice.selected != choice.antigenic;
  return choice;
}

Matrix pairing_from_concentrations(const Vector& x, std::size_t n_antigens) {
  return x.replicate(1, static_cast<Eigen::Index>(n_antigens));
}

void Scenario::validate() const {
  if (antibodies.empty()) throw std::invalid_argument("scenario: no antibodies");
  if (antigens.empty()) throw std::invalid_argument("scenario: no antigens");
  params.validate();
  const auto n_ab = static_cast<Eigen::Index>(antibodies.size());
  const auto n_ag = static_cast<Eigen::Index>(antigens.size());
  if (P.rows() != n_ab || P.cols() != n_ag || I.rows() != n_ab || I.cols() != n_ag) {
    throw std::invalid_argument("scenario: P and I must be antibodies x antigens");
  }
  AffinityMatrices{P, I, Matrix::Zero(n_ab, n_ag)}.validate();
  for (const auto& ab : antibodies) {
    if (!(ab.concentration > 0.0 && ab.concentration < 1.0)) {
      throw std::invalid_argument("scenario: initial concentrations must lie in (0, 1)");
    }
  }
  for (const auto& ag : antigens) {
    if (!(ag.concentration >= 0.0) || !std::isfinite(ag.concentration)) {
      throw std::invalid_argument("scenario: antigen concentrations must be finite and >= 0");
    }
  }
  if (presentations.empty()) throw std::invalid_argument("scenario: empty presentation schedule");
  for (auto v : presentations) {
    if (v >= antigens.size()) throw std::invalid_argument("scenario: presentation index out of range");
  }
  if (steps < 0) throw std::invalid_argument("scenario: steps must be >= 0");
}

ScenarioResult run_scenario(const Scenario& scenario) {
  scenario.validate();
  const auto n_ab = static_cast<Eigen::Index>(scenario.antibodies.size());
  const auto n_ag = scenario.antigens.size();

  NetworkState state;
  state.m = build_match_matrix(scenario.antibodies, scenario.antigens, scenario.match);
  state.x = Vector(n_ab);
  for (Eigen::Index i = 0; i < n_ab; ++i) {
    state.x(i) = scenario.antibodies[static_cast<std::size_t>(i)].concentration;
  }

  ScenarioResult result;
  Matrix P = scenario.P;
  for (int t = 1; t <= scenario.steps; ++t) {
    const std::size_t v =
        scenario.presentations[static_cast<std::size_t>(t - 1) % scenario.presentations.size()];
    const std::size_t r = select_antigenic(P, v);
    const Matrix X = pairing_from_concentrations(state.x, n_ag);
    const Vector eps = stimulation(P, scenario.I, X, r, v, scenario.idiotope_index);
    const Vector delta = suppression(P, scenario.I, X, r, v, scenario.params.k1);
    P = update_affinity(P, eps, delta, v);

    state.y = Vector::Zero(static_cast<Eigen::Index>(n_ag));
    state.y(static_cast<Eigen::Index>(v)) = scenario.antigens[v].concentration;
    state = step(state, scenario.params);

    const auto choice = select_by_activation(state.x, P, v, r);
    TrajectoryRow row;
    row.t = t;
    row.presented = v;
    row.x.assign(state.x.data(), state.x.data() + state.x.size());
    row.selected = choice.selected;
    row.antigenic = choice.antigenic;
    row.idiotypic_difference = choice.idiotypic_difference;
    result.rows.push_back(std::move(row));
  }
  result.final_P = P;
  result.m = state.m;
  return result;
}

}  // namespace ais::idionet
