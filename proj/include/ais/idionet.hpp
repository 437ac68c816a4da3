#pragma once

// Idiotypic network dynamics.
//
// Farmer model: antibodies carry a paratope and an epitope bit string, match
// specificities come from complementary alignment scoring, and concentrations
// follow
//
//   dx_i/dt = c [ sum_j m_ji x_i y_j - k1 sum_j m_ij x_i x_j + sum_j m_ji x_i x_j ] - k2 x_i
//
// (antigen stimulation, suppression by other antibodies, stimulation by other
// antibodies, damping), integrated with explicit Euler and squashed into (0,1)
// after every step. The first index of m is the epitope owner, the second the
// paratope owner.
//
// Whitbrook variant: a paratope matrix P and idiotope matrix I (antibody set
// member x antigen) drive stimulation/suppression of the affinities to the
// presented antigen, and the selected antibody maximises concentration times
// affinity.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ais/affinity.hpp"

namespace ais::idionet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NetworkAntibody {
  BitPattern paratope;
  BitPattern epitope;
  double concentration = 0.5;
  std::optional<std::string> action;
};

struct AntigenPattern {
  BitPattern epitope;
  double concentration = 1.0;
};

struct FarmerParams {
  double c = 1.0;
  double k1 = 0.5;
  double k2 = 0.1;
  double dt = 0.1;
  double squash_theta = 0.5;

  void validate() const;
};

/// Match specificities, indexed (epitope owner, paratope owner).
struct MatchMatrices {
  /// N x N: (j, i) = total_reaction(paratope of antibody i, epitope of antibody j).
  Matrix antibody;
  /// n x N: (j, i) = total_reaction(paratope of antibody i, epitope of antigen j).
  Matrix antigen;
};

MatchMatrices build_match_matrix(const std::vector<NetworkAntibody>& antibodies,
                                 const std::vector<AntigenPattern>& antigens,
                                 const MatchConfig& cfg);

/// The four contributions to dx/dt, before the rate constant is applied.
struct FarmerTerms {
  Vector antigen_stimulation;  // sum_j m_ji x_i y_j
  Vector suppression;          // k1 sum_j m_ij x_i x_j
  Vector stimulation;          // sum_j m_ji x_i x_j
  Vector damping;              // k2 x_i
};

FarmerTerms farmer_terms(const Vector& x, const Vector& y, const MatchMatrices& m,
                         const FarmerParams& params);

Vector farmer_derivative(const Vector& x, const Vector& y, const MatchMatrices& m,
                         const FarmerParams& params);

/// Logistic squash 1 / (1 + exp(theta - raw)). The result is kept strictly
/// inside (0, 1): saturated values stop at the nearest representable double.
double squash(double raw, double theta);

struct NetworkState {
  Vector x;  // antibody concentrations
  Vector y;  // antigen concentrations
  MatchMatrices m;
};

/// x + dt * dx/dt, before squashing. Throws std::domain_error on non-finite values.
Vector euler_update(const NetworkState& state, const FarmerParams& params);

/// One Euler step followed by squashing every concentration.
NetworkState step(const NetworkState& state, const FarmerParams& params);

/// Highest concentration; ties go to the lowest index.
std::size_t select_by_concentration(const Vector& x);

/// Paratope, idiotope and pairing matrices, z antibodies x n antigens.
struct AffinityMatrices {
  Matrix P;
  Matrix I;
  Matrix X;

  void validate() const;
};

/// Antigenic antibody for antigen v: argmax_i P(i, v), lowest index on ties.
std::size_t select_antigenic(const Matrix& P, std::size_t v);

/// Which idiotope row enters the stimulation sum.
enum class IdiotopeIndex {
  /// I(r, j): the antigenic antibody's idiotope is compared with every paratope.
  Antigenic,
  /// I(i, j): subscripts as typeset in the original equation.
  Printed,
};

/// eps_i = sum_j (1 - P(i,j)) I(r|i, j) X(i,j) X(r,j).
Vector stimulation(const Matrix& P, const Matrix& I, const Matrix& X, std::size_t r,
                   std::size_t v, IdiotopeIndex index = IdiotopeIndex::Antigenic);

/// delta_i = k1 sum_j P(r,j) I(i,j) X(i,j) X(r,j).
Vector suppression(const Matrix& P, const Matrix& I, const Matrix& X, std::size_t r,
                   std::size_t v, double k1);

/// P'(i, v) = clamp(P(i, v) + eps_i - delta_i, 0, 1); other columns untouched.
Matrix update_affinity(const Matrix& P, const Vector& eps, const Vector& delta, std::size_t v);

struct ActivationChoice {
  std::size_t selected = 0;
  std::size_t antigenic = 0;
  bool idiotypic_difference = false;
};

/// argmax_i x_i P(i, v) (lowest index on ties), flagged when it differs from
/// the antigenic antibody.
ActivationChoice select_by_activation(const Vector& x, const Matrix& P, std::size_t v);

/// As above, with the antigenic antibody fixed by the caller (e.g. chosen
/// before P was updated).
ActivationChoice select_by_activation(const Vector& x, const Matrix& P, std::size_t v,
                                      std::size_t antigenic);

/// Default pairing weights: X(i, j) = x_i for every antigen column.
Matrix pairing_from_concentrations(const Vector& x, std::size_t n_antigens);

/// A scripted run combining both models.
struct Scenario {
  std::vector<NetworkAntibody> antibodies;
  std::vector<AntigenPattern> antigens;
  MatchConfig match;
  FarmerParams params;
  Matrix P;
  Matrix I;
  /// Antigen index presented at step t is presentations[(t - 1) % size].
  std::vector<std::size_t> presentations;
  int steps = 10;
  IdiotopeIndex idiotope_index = IdiotopeIndex::Antigenic;

  void validate() const;
};

struct TrajectoryRow {
  int t = 0;
  std::size_t presented = 0;
  std::vector<double> x;
  std::size_t selected = 0;
  std::size_t antigenic = 0;
  bool idiotypic_difference = false;
};

struct ScenarioResult {
  std::vector<TrajectoryRow> rows;
  Matrix final_P;
  MatchMatrices m;
};

/// For each step: pick the antigenic antibody from P, apply stimulation and
/// suppression with X from the current concentrations, update P, advance the
/// Farmer dynamics with only the presented antigen present, then select by
/// activation.
ScenarioResult run_scenario(const Scenario& scenario);

}  // namespace ais::idionet
