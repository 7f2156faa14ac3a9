#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "spinstar/finite_oracle.hpp"

namespace spinstar {

namespace {

// Bath product basis: bit i of the index is the state of bath spin i
// (set = up). Central spin is the leading factor: index = spin * 2^N + bath,
// spin 0 = up.
Eigen::MatrixXd bath_hamiltonian(int n_bath, double g) {
  const int dim_b = 1 << n_bath;
  Eigen::MatrixXd hb = Eigen::MatrixXd::Zero(dim_b, dim_b);
  for (int s = 0; s < dim_b; ++s) {
    for (int i = 0; i < n_bath; ++i) {
      for (int j = 0; j < n_bath; ++j) {
        if (i == j) continue;
        // S_i^+ S_j^-  (the ordered pair sum also covers S_i^- S_j^+)
        if (!(s & (1 << i)) && (s & (1 << j))) {
          const int t = (s | (1 << i)) & ~(1 << j);
          hb(t, s) += 1.0;
        }
        if ((s & (1 << i)) && !(s & (1 << j))) {
          const int t = (s & ~(1 << i)) | (1 << j);
          hb(t, s) += 1.0;
        }
      }
    }
  }
  return (g / n_bath) * hb;
}

Eigen::MatrixXd total_hamiltonian(int n_bath, const ModelParams& p,
                                  const Eigen::MatrixXd& hb) {
  const int dim_b = 1 << n_bath;
  const int dim = 2 * dim_b;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  h.topLeftCorner(dim_b, dim_b) = hb;
  h.bottomRightCorner(dim_b, dim_b) = hb;
  for (int s = 0; s < dim_b; ++s) {
    h(s, s) += 0.5 * p.mu0;
    h(dim_b + s, dim_b + s) -= 0.5 * p.mu0;
  }
  const double c = p.g0 / std::sqrt(static_cast<double>(n_bath));
  for (int s = 0; s < dim_b; ++s) {
    for (int i = 0; i < n_bath; ++i) {
      if (s & (1 << i)) {
        // S^+ J^-: |down, s> -> |up, s with bit i lowered>
        const int t = s & ~(1 << i);
        h(t, dim_b + s) += c;
        h(dim_b + s, t) += c;  // hermitian partner S^- J^+
      }
    }
  }
  return h;
}

int popcount(int s) {
  int c = 0;
  for (; s; s >>= 1) c += s & 1;
  return c;
}

// Columns of the bath density operator eigenbasis with their probabilities.
void thermal_bath_columns(int n_bath, const ModelParams& p, BathPrep prep,
                          const Eigen::MatrixXd& hb, Eigen::MatrixXd& phi,
                          Eigen::VectorXd& prob) {
  const int dim_b = 1 << n_bath;
  if (prep == BathPrep::FullThermal) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hb);
    const Eigen::VectorXd& eb = es.eigenvalues();
    phi = es.eigenvectors();
    prob.resize(dim_b);
    if (p.temperature == 0.0) {
      const double scale = std::max(1.0, eb.cwiseAbs().maxCoeff());
      const double tol = 1e-9 * scale;
      int count = 0;
      for (int k = 0; k < dim_b; ++k)
        if (eb(k) - eb(0) <= tol) ++count;
      for (int k = 0; k < dim_b; ++k)
        prob(k) = (eb(k) - eb(0) <= tol) ? 1.0 / count : 0.0;
    } else {
      for (int k = 0; k < dim_b; ++k)
        prob(k) = std::exp(-(eb(k) - eb(0)) / p.temperature);
      prob /= prob.sum();
    }
    return;
  }
  // CollectiveThermal: Dicke states |j=N/2, m=n-N/2> (uniform symmetric
  // superpositions of all strings with n up spins), occupied geometrically.
  const FiniteBathThermalState w = collective_thermal_weights(n_bath, p.g, p.temperature);
  phi = Eigen::MatrixXd::Zero(dim_b, static_cast<int>(w.entries.size()));
  prob.resize(static_cast<int>(w.entries.size()));
  for (int col = 0; col < prob.size(); ++col) {
    const int n_up = (w.entries[static_cast<std::size_t>(col)].twice_m + n_bath) / 2;
    int count = 0;
    for (int s = 0; s < dim_b; ++s)
      if (popcount(s) == n_up) ++count;
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    for (int s = 0; s < dim_b; ++s)
      if (popcount(s) == n_up) phi(s, col) = amp;
    prob(col) = w.entries[static_cast<std::size_t>(col)].weight;
  }
}

}  // namespace

StateSeries brute_force_evolve(int n_bath, const TimeGrid& grid, const ModelParams& params,
                               const InitialSpinState& init, BathPrep prep) {
  if (n_bath < 1) throw std::domain_error("brute_force_evolve: n_bath must be >= 1");
  if (n_bath > kBruteForceCap)
    throw capacity_error("brute_force_evolve: n_bath exceeds the 2^(N+1) cap (N <= 10)");

  const int dim_b = 1 << n_bath;
  const int dim = 2 * dim_b;

  const Eigen::MatrixXd hb = bath_hamiltonian(n_bath, params.g);
  const Eigen::MatrixXd h = total_hamiltonian(n_bath, params, hb);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::VectorXd& energy = es.eigenvalues();
  const Eigen::MatrixXd& v = es.eigenvectors();

  Eigen::MatrixXd phi;
  Eigen::VectorXd prob;
  thermal_bath_columns(n_bath, params, prep, hb, phi, prob);

  // Keep only occupied bath columns.
  std::vector<int> kept;
  for (int k = 0; k < prob.size(); ++k)
    if (prob(k) > 0.0) kept.push_back(k);
  const int n_k = static_cast<int>(kept.size());

  const std::complex<double> alpha = init.alpha();
  const std::complex<double> beta = init.beta();

  // psi_k = alpha |up> x phi_k + beta |down> x phi_k, expressed in the
  // eigenbasis of H; real and imaginary parts carried separately so all the
  // heavy products stay real GEMMs.
  Eigen::MatrixXd psi_re = Eigen::MatrixXd::Zero(dim, n_k);
  Eigen::MatrixXd psi_im = Eigen::MatrixXd::Zero(dim, n_k);
  Eigen::VectorXd p(n_k);
  for (int c = 0; c < n_k; ++c) {
    p(c) = prob(kept[c]);
    psi_re.col(c).head(dim_b) = alpha.real() * phi.col(kept[c]);
    psi_im.col(c).head(dim_b) = alpha.imag() * phi.col(kept[c]);
    psi_re.col(c).tail(dim_b) = beta.real() * phi.col(kept[c]);
    psi_im.col(c).tail(dim_b) = beta.imag() * phi.col(kept[c]);
  }
  const Eigen::MatrixXd u0_re = v.transpose() * psi_re;
  const Eigen::MatrixXd u0_im = v.transpose() * psi_im;

  StateSeries out;
  out.times = grid.times();
  out.states.resize(out.times.size());

  Eigen::ArrayXd cos_t(dim), sin_t(dim);
  for (std::size_t it = 0; it < out.times.size(); ++it) {
    const double t = out.times[it];
    for (int q = 0; q < dim; ++q) {
      cos_t(q) = std::cos(energy(q) * t);
      sin_t(q) = std::sin(energy(q) * t);
    }
    // e^{-iEt} (a + ib) = (a cos + b sin) + i (b cos - a sin)
    const Eigen::MatrixXd c_re =
        (u0_re.array().colwise() * cos_t + u0_im.array().colwise() * sin_t).matrix();
    const Eigen::MatrixXd c_im =
        (u0_im.array().colwise() * cos_t - u0_re.array().colwise() * sin_t).matrix();
    const Eigen::MatrixXd x_re = v * c_re;
    const Eigen::MatrixXd x_im = v * c_im;

    const auto top_re = x_re.topRows(dim_b).array();
    const auto top_im = x_im.topRows(dim_b).array();
    const auto bot_re = x_re.bottomRows(dim_b).array();
    const auto bot_im = x_im.bottomRows(dim_b).array();

    const double uu =
        ((top_re.square() + top_im.square()).colwise().sum().transpose() * p.array()).sum();
    // rho_ud = sum_k p_k sum_c x_up (x_down)^*
    const double ud_re =
        ((top_re * bot_re + top_im * bot_im).colwise().sum().transpose() * p.array()).sum();
    const double ud_im =
        ((top_im * bot_re - top_re * bot_im).colwise().sum().transpose() * p.array()).sum();

    out.states[it] = QubitState{uu, {ud_re, ud_im}};
  }
  return out;
}

}  // namespace spinstar
