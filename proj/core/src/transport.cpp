#include "cvf/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvf/errors.hpp"
#include "cvf/operators.hpp"
#include "cvf/state.hpp"

namespace cvf {

namespace {

void check_step(const VectorField& w, double dt, const TransportOptions& opts, const char* where) {
  opts.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidParams, std::string(where) + ": dt must be positive");
  }
  const double c = cfl_number(w, dt / opts.substeps);
  if (!(c <= opts.cfl_limit)) {
    throw Error(ErrorCode::CflViolation, std::string(where) + ": CFL number " +
                                             std::to_string(c) + " exceeds " +
                                             std::to_string(opts.cfl_limit));
  }
}

void check_positive_output(const ScalarField& rho) {
  for (double r : rho.data()) {
    if (!(r > 0.0)) {
      throw Error(ErrorCode::PositivityLost,
                  "density sample " + std::to_string(r) + " after transport step");
    }
  }
}

// ---------------------------------------------------------------- spectral RK4

class DensityRhs {
 public:
  DensityRhs(SpectralWorkspace& ws, const VectorField& w, bool dealias, const ScalarSource& src)
      : ws_(ws), w_(w), dealias_(dealias), src_(src), flux_(ws.modes()), acc_(ws.modes()),
        d_(ws.modes()), tmp_(w.points()), srcbuf_(w.grid()) {}

  void operator()(const ScalarField& rho, double t, ScalarField& out) {
    std::fill(acc_.begin(), acc_.end(), Complex{});
    for (int a = 0; a < 3; ++a) {
      const auto wa = w_.comp(a);
      for (std::size_t p = 0; p < tmp_.size(); ++p) tmp_[p] = rho[p] * wa[p];
      ws_.forward(tmp_, flux_);
      if (dealias_) ws_.apply_dealias(flux_);
      ws_.differentiate(flux_, a, d_);
      for (std::size_t m = 0; m < acc_.size(); ++m) acc_[m] -= d_[m];
    }
    ws_.inverse(acc_, out.comp(0));
    if (src_) {
      src_(t, srcbuf_);
      out += srcbuf_;
    }
  }

 private:
  SpectralWorkspace& ws_;
  const VectorField& w_;
  bool dealias_;
  const ScalarSource& src_;
  SpectralBuffer flux_, acc_, d_;
  AlignedVector tmp_;
  ScalarField srcbuf_;
};

ScalarField density_rk4(SpectralWorkspace& ws, const ScalarField& rho0, const VectorField& w,
                        double dt, const TransportOptions& opts, const ScalarSource& src,
                        double t0) {
  const Grid& g = rho0.grid();
  DensityRhs rhs(ws, w, opts.dealias, src);
  ScalarField rho = rho0, stage(g), k(g), acc(g);
  const double h = dt / opts.substeps;
  for (int s = 0; s < opts.substeps; ++s) {
    const double t = t0 + s * h;
    rhs(rho, t, k);
    acc = k;
    stage = rho;
    stage.axpy(0.5 * h, k);
    rhs(stage, t + 0.5 * h, k);
    acc.axpy(2.0, k);
    stage = rho;
    stage.axpy(0.5 * h, k);
    rhs(stage, t + 0.5 * h, k);
    acc.axpy(2.0, k);
    stage = rho;
    stage.axpy(h, k);
    rhs(stage, t + h, k);
    acc += k;
    rho.axpy(h / 6.0, acc);
  }
  return rho;
}

// Spectral state of E is carried alongside the real one so that stage
// derivatives need only inverse transforms.
class DeformationRhs {
 public:
  DeformationRhs(SpectralWorkspace& ws, const VectorField& w, const TensorField& G, bool dealias,
                 const TensorSource& src)
      : ws_(ws), w_(w), G_(G), dealias_(dealias), src_(src), d_(ws.modes()),
        deriv_{AlignedVector(w.points()), AlignedVector(w.points()), AlignedVector(w.points())},
        rhs_(w.points()), srcbuf_(w.grid()) {}

  // K = rhs(E_s); Khat receives its (masked) coefficients.
  void operator()(const TensorField& Es, const std::array<SpectralBuffer, 9>& Ehat, double t,
                  TensorField& K, std::array<SpectralBuffer, 9>& Khat) {
    const std::size_t n = Es.points();
    if (src_) src_(t, srcbuf_);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const std::size_t c = static_cast<std::size_t>(3 * i + j);
        for (int l = 0; l < 3; ++l) {
          ws_.differentiate(Ehat[c], l, d_);
          ws_.inverse(d_, deriv_[l]);
        }
        for (std::size_t p = 0; p < n; ++p) {
          double v = G_(c, p);
          for (int l = 0; l < 3; ++l) {
            v -= w_(static_cast<std::size_t>(l), p) * deriv_[l][p];
            v += G_(static_cast<std::size_t>(3 * i + l), p) * Es(static_cast<std::size_t>(3 * l + j), p);
          }
          rhs_[p] = v;
        }
        ws_.forward(rhs_, Khat[c]);
        if (dealias_) ws_.apply_dealias(Khat[c]);
        if (src_) {
          ws_.forward(srcbuf_.comp(c), d_);
          for (std::size_t m = 0; m < d_.size(); ++m) Khat[c][m] += d_[m];
        }
        ws_.inverse(Khat[c], K.comp(c));
      }
    }
  }

 private:
  SpectralWorkspace& ws_;
  const VectorField& w_;
  const TensorField& G_;
  bool dealias_;
  const TensorSource& src_;
  SpectralBuffer d_;
  std::array<AlignedVector, 3> deriv_;
  AlignedVector rhs_;
  TensorField srcbuf_;
};

TensorField deformation_rk4(SpectralWorkspace& ws, const TensorField& E0, const VectorField& w,
                            const TensorField& G, double dt, const TransportOptions& opts,
                            const TensorSource& src, double t0) {
  const Grid& g = E0.grid();
  DeformationRhs rhs(ws, w, G, opts.dealias, src);
  TensorField E = E0, stage(g), K(g), acc(g);
  std::array<SpectralBuffer, 9> Ehat, Khat, Shat;
  for (auto& b : Khat) b.resize(ws.modes());
  const double h = dt / opts.substeps;

  auto make_stage = [&](double c) {
    stage = E;
    stage.axpy(c, K);
    for (std::size_t q = 0; q < 9; ++q) {
      for (std::size_t m = 0; m < ws.modes(); ++m) Shat[q][m] = Ehat[q][m] + c * Khat[q][m];
    }
  };

  for (int s = 0; s < opts.substeps; ++s) {
    const double t = t0 + s * h;
    for (std::size_t q = 0; q < 9; ++q) {
      ws.forward(E.comp(q), Ehat[q]);
      Shat[q].resize(ws.modes());
    }
    rhs(E, Ehat, t, K, Khat);
    acc = K;
    make_stage(0.5 * h);
    rhs(stage, Shat, t + 0.5 * h, K, Khat);
    acc.axpy(2.0, K);
    make_stage(0.5 * h);
    rhs(stage, Shat, t + 0.5 * h, K, Khat);
    acc.axpy(2.0, K);
    make_stage(h);
    rhs(stage, Shat, t + h, K, Khat);
    acc += K;
    E.axpy(h / 6.0, acc);
  }
  return E;
}

// ------------------------------------------------------- semi-Lagrangian RK2

// Periodic tricubic Lagrange interpolation at points given in grid-index
// coordinates.
struct Stencil {
  std::array<std::size_t, 4> ix, iy, iz;
  std::array<double, 4> wx, wy, wz;
};

void lagrange_weights(double x, int n, std::array<std::size_t, 4>& idx, std::array<double, 4>& w) {
  const double fl = std::floor(x);
  const double s = x - fl;
  const long i0 = static_cast<long>(fl);
  w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
  w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
  w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
  for (int q = 0; q < 4; ++q) {
    long i = (i0 - 1 + q) % n;
    if (i < 0) i += n;
    idx[q] = static_cast<std::size_t>(i);
  }
}

class Interpolator {
 public:
  explicit Interpolator(const Grid& g) : g_(g), st_(g.size()) {}

  /// xi[a][p] are index coordinates of the target for sample p.
  void set_points(const std::array<AlignedVector, 3>& xi) {
    for (std::size_t p = 0; p < st_.size(); ++p) {
      lagrange_weights(xi[0][p], g_.nx(), st_[p].ix, st_[p].wx);
      lagrange_weights(xi[1][p], g_.ny(), st_[p].iy, st_[p].wy);
      lagrange_weights(xi[2][p], g_.nz(), st_[p].iz, st_[p].wz);
    }
  }

  void apply(std::span<const double> f, std::span<double> out) const {
    const std::size_t nx = static_cast<std::size_t>(g_.nx());
    const std::size_t ny = static_cast<std::size_t>(g_.ny());
    for (std::size_t p = 0; p < st_.size(); ++p) {
      const Stencil& s = st_[p];
      double v = 0.0;
      for (int c = 0; c < 4; ++c) {
        double vy = 0.0;
        for (int b = 0; b < 4; ++b) {
          const double* row = f.data() + (s.iz[c] * ny + s.iy[b]) * nx;
          const double vx = s.wx[0] * row[s.ix[0]] + s.wx[1] * row[s.ix[1]] +
                            s.wx[2] * row[s.ix[2]] + s.wx[3] * row[s.ix[3]];
          vy += s.wy[b] * vx;
        }
        v += s.wz[c] * vy;
      }
      out[p] = v;
    }
  }

  template <std::size_t N>
  Field<N> apply(const Field<N>& f) const {
    Field<N> out(f.grid());
    for (std::size_t c = 0; c < N; ++c) apply(f.comp(c), out.comp(c));
    return out;
  }

 private:
  Grid g_;
  std::vector<Stencil> st_;
};

// Departure points of a midpoint (RK2) backward trajectory over one sub-step.
void departure_points(const VectorField& w, double h, Interpolator& interp) {
  const Grid& g = w.grid();
  std::array<AlignedVector, 3> xi{AlignedVector(g.size()), AlignedVector(g.size()),
                                  AlignedVector(g.size())};
  auto fill = [&](auto&& disp) {
    for (int iz = 0; iz < g.nz(); ++iz) {
      for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
          const std::size_t p = g.index(ix, iy, iz);
          const std::array<int, 3> i = {ix, iy, iz};
          for (int a = 0; a < 3; ++a) xi[a][p] = i[a] - disp(a, p) / g.spacing()[a];
        }
      }
    }
  };
  fill([&](int a, std::size_t p) { return 0.5 * h * w(static_cast<std::size_t>(a), p); });
  interp.set_points(xi);
  const VectorField wmid = interp.apply(w);
  fill([&](int a, std::size_t p) { return h * wmid(static_cast<std::size_t>(a), p); });
  interp.set_points(xi);
}

ScalarField density_sl(SpectralWorkspace& ws, const ScalarField& rho0, const VectorField& w,
                       double dt, const TransportOptions& opts, const ScalarSource& src,
                       double t0) {
  const Grid& g = rho0.grid();
  const double h = dt / opts.substeps;
  const ScalarField divw = divergence(ws, w);
  Interpolator interp(g);
  departure_points(w, h, interp);
  const ScalarField divd = interp.apply(divw);
  ScalarField rho = rho0, srcbuf(g);
  for (int s = 0; s < opts.substeps; ++s) {
    const double mass0 = integrate(rho.data(), g);
    ScalarField next = interp.apply(rho);
    for (std::size_t p = 0; p < g.size(); ++p) {
      next[p] *= std::exp(-0.5 * h * (divw[p] + divd[p]));
    }
    const double mass1 = integrate(next.data(), g);
    if (mass1 > 0.0) next *= mass0 / mass1;
    if (src) {
      src(t0 + (s + 0.5) * h, srcbuf);
      next.axpy(h, srcbuf);
    }
    rho = std::move(next);
  }
  return rho;
}

TensorField deformation_sl(const TensorField& E0, const VectorField& w, const TensorField& G,
                           double dt, const TransportOptions& opts, const TensorSource& src,
                           double t0) {
  const Grid& g = E0.grid();
  const double h = dt / opts.substeps;
  Interpolator interp(g);
  departure_points(w, h, interp);
  const TensorField Gd = interp.apply(G);
  TensorField E = E0, srcbuf(g);
  for (int s = 0; s < opts.substeps; ++s) {
    const TensorField Ed = interp.apply(E);
    TensorField next(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
      // Heun step of F' = G F along the characteristic, written for E = F - I.
      std::array<double, 9> k1, estar;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double v = Gd(static_cast<std::size_t>(3 * i + j), p);
          for (int l = 0; l < 3; ++l) {
            v += Gd(static_cast<std::size_t>(3 * i + l), p) * Ed(static_cast<std::size_t>(3 * l + j), p);
          }
          k1[3 * i + j] = v;
          estar[3 * i + j] = Ed(static_cast<std::size_t>(3 * i + j), p) + h * v;
        }
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double k2 = G(static_cast<std::size_t>(3 * i + j), p);
          for (int l = 0; l < 3; ++l) k2 += G(static_cast<std::size_t>(3 * i + l), p) * estar[3 * l + j];
          const std::size_t c = static_cast<std::size_t>(3 * i + j);
          next(c, p) = Ed(c, p) + 0.5 * h * (k1[3 * i + j] + k2);
        }
      }
    }
    if (src) {
      src(t0 + (s + 0.5) * h, srcbuf);
      next.axpy(h, srcbuf);
    }
    E = std::move(next);
  }
  return E;
}

}  // namespace

void TransportOptions::validate() const {
  if (scheme != TransportScheme::SpectralRk4 && scheme != TransportScheme::SemiLagrangianRk2) {
    throw Error(ErrorCode::InvalidParams, "unknown transport scheme");
  }
  if (substeps < 1) throw Error(ErrorCode::InvalidParams, "transport substeps must be >= 1");
  if (!(cfl_limit > 0.0) || !std::isfinite(cfl_limit)) {
    throw Error(ErrorCode::InvalidParams, "transport cfl_limit must be positive");
  }
}

double cfl_number(const VectorField& w, double dt) {
  return max_pointwise_norm(w) * dt / w.grid().min_spacing();
}

ScalarField advance_density(SpectralWorkspace& ws, const ScalarField& rho, const VectorField& w,
                            double dt, const TransportOptions& opts, const ScalarSource& source,
                            double t0) {
  check_step(w, dt, opts, "advance_density");
  require_positive_density(rho, "advance_density");
  ScalarField out = opts.scheme == TransportScheme::SpectralRk4
                        ? density_rk4(ws, rho, w, dt, opts, source, t0)
                        : density_sl(ws, rho, w, dt, opts, source, t0);
  check_positive_output(out);
  return out;
}

TensorField advance_deformation(SpectralWorkspace& ws, const TensorField& E, const VectorField& w,
                                double dt, const TransportOptions& opts,
                                const TensorSource& source, double t0) {
  check_step(w, dt, opts, "advance_deformation");
  return advance_deformation(ws, E, w, jacobian(ws, w), dt, opts, source, t0);
}

TensorField advance_deformation(SpectralWorkspace& ws, const TensorField& E, const VectorField& w,
                                const TensorField& grad_w, double dt, const TransportOptions& opts,
                                const TensorSource& source, double t0) {
  check_step(w, dt, opts, "advance_deformation");
  return opts.scheme == TransportScheme::SpectralRk4
             ? deformation_rk4(ws, E, w, grad_w, dt, opts, source, t0)
             : deformation_sl(E, w, grad_w, dt, opts, source, t0);
}

SigmaField sigma_from_density(SpectralWorkspace& ws, const ScalarField& rho) {
  require_positive_density(rho, "sigma_from_density");
  ScalarField lr(rho.grid());
  for (std::size_t p = 0; p < rho.points(); ++p) lr[p] = std::log(rho[p]);
  return {gradient(ws, lr)};
}

SigmaResidual sigma_evolution_residual(SpectralWorkspace& ws,
                                       std::span<const ScalarField> rho_series,
                                       std::span<const VectorField> u_series, double dt) {
  if (rho_series.size() < 3 || rho_series.size() != u_series.size()) {
    throw Error(ErrorCode::InsufficientHistory,
                "sigma_evolution_residual: need >= 3 states in equal-length series, got " +
                    std::to_string(rho_series.size()) + " and " +
                    std::to_string(u_series.size()));
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "sigma_evolution_residual: dt <= 0");
  std::vector<VectorField> sigma;
  sigma.reserve(rho_series.size());
  for (const auto& r : rho_series) sigma.push_back(sigma_from_density(ws, r).sigma);

  SigmaResidual out;
  for (std::size_t n = 1; n + 1 < sigma.size(); ++n) {
    ScalarField us(rho_series[n].grid());
    for (std::size_t p = 0; p < us.points(); ++p) {
      double s = 0.0;
      for (std::size_t a = 0; a < 3; ++a) s += u_series[n](a, p) * sigma[n](a, p);
      us[p] = s;
    }
    dealias(ws, us);
    VectorField r = gradient(ws, us);
    r.axpy(1.0 / (2.0 * dt), sigma[n + 1]);
    r.axpy(-1.0 / (2.0 * dt), sigma[n - 1]);
    out.l2 = std::max(out.l2, l2_norm(r));
    out.linf = std::max(out.linf, max_pointwise_norm(r));
  }
  return out;
}

}  // namespace cvf
