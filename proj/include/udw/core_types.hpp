#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace udw {

using cd = std::complex<double>;
using Mat4c = Eigen::Matrix<cd, 4, 4>;
using Vec4c = Eigen::Matrix<cd, 4, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Vec8c = Eigen::Matrix<cd, 8, 1>;
using Mat8c = Eigen::Matrix<cd, 8, 8>;

// (ρ11, ρ22, ρ33, Re ρ14, Im ρ14, Re ρ23, Im ρ23)
using XVector = Vec7;
// (ρ12, ρ13, ρ24, ρ34, ρ21, ρ31, ρ42, ρ43)
using OVector = Vec8c;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

struct invalid_state : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct unsupported_regime : std::domain_error {
  using std::domain_error::domain_error;
};

struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Natural units c = hbar = 1. L has units of time, epsilon is the UV regulator.
struct Params {
  double g = 0.01;
  double a = 1.0;
  double omega = 0.01;
  double L = 2.0;
  double epsilon = 0.01;

  // g = 0 is admitted only where a caller asks for the free limit.
  void validate(bool allow_zero_coupling = false) const;
  double unruh_temperature() const { return a / (2.0 * pi); }
  double aL() const { return a * L; }
};

bool operator==(const Params& l, const Params& r);

// Joint two-qubit state in the basis {|uu>, |ud>, |du>, |dd>}.
class DensityMatrix4 {
 public:
  DensityMatrix4();
  explicit DensityMatrix4(const Mat4c& m);

  // Skips the Hermiticity/trace checks; for perturbative approximants.
  static DensityMatrix4 unchecked(const Mat4c& m);

  const Mat4c& matrix() const { return m_; }
  cd operator()(int n, int m) const { return m_(n, m); }

  double min_eigenvalue() const;
  bool is_physical(double slack = 1e-10) const { return min_eigenvalue() >= -slack; }

 private:
  struct no_check {};
  DensityMatrix4(const Mat4c& m, no_check) : m_(m) {}
  Mat4c m_;
};

void check_state(const Mat4c& m, double tol = 1e-12);

DensityMatrix4 pure_state(const Vec4c& psi);

namespace states {
DensityMatrix4 ground();          // |dd>
DensityMatrix4 up_up();           // |uu>
DensityMatrix4 down_up();         // |du>
DensityMatrix4 bell_phi_plus();   // (|dd> + |uu>)/sqrt2
DensityMatrix4 maximally_mixed();
DensityMatrix4 by_name(const std::string& name);
}  // namespace states

// Raw coordinate extraction, no state checks (also used on generator outputs).
XVector x_coords(const Mat4c& m);
OVector o_coords(const Mat4c& m);
// Places x and y into a matrix; rho44 = trace - rho11 - rho22 - rho33.
Mat4c embed_blocks(const XVector& x, const OVector& y, double trace);

std::pair<XVector, OVector> split_blocks(const DensityMatrix4& rho);
DensityMatrix4 join_blocks(const XVector& x, const OVector& y);

// rho^I = e^{i h tau} rho e^{-i h tau}, h = omega/2 (s3^A + s3^B)
DensityMatrix4 to_interaction_picture(const DensityMatrix4& rho_s, double tau, double omega);
DensityMatrix4 to_schrodinger_picture(const DensityMatrix4& rho_i, double tau, double omega);
Mat4c to_interaction_picture(const Mat4c& rho_s, double tau, double omega);
Mat4c to_schrodinger_picture(const Mat4c& rho_i, double tau, double omega);

// Pauli operators on the joint space; detector 0 = A, 1 = B; alpha in {1,2,3}.
const Mat4c& pauli(int detector, int alpha);
Mat4c bare_hamiltonian(double omega);

// Block matrices of a linear superoperator f on 4x4 matrices.
// X block: f(rho(x)) = lin * x + affine, with rho44 fixed by unit trace.
struct XAffineMap {
  Mat7 lin;
  Vec7 affine;
};
XAffineMap linearize_x(const std::function<Mat4c(const Mat4c&)>& f);
Mat8c linearize_o(const std::function<Mat4c(const Mat4c&)>& f);

enum class SolverTag { markov, markov_rwa, nonmarkov };
std::string to_string(SolverTag tag);
SolverTag solver_tag_from_string(const std::string& s);

struct TimeSeries {
  std::vector<double> taus;
  std::vector<DensityMatrix4> states;
  Params params;
  SolverTag solver = SolverTag::markov;

  void validate() const;
};

}  // namespace udw
