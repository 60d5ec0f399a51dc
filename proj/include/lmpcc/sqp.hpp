#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace lmpcc {

enum class SqpStatus { converged, degraded, failed };

// Gauss-Newton SQP over a multiple-shooting trajectory with box bounds.
// Bounds are handled by a log barrier whose weight decays across iterations;
// each iteration linearizes the dynamics at the current trajectory, solves
// the resulting convex quadratic model with a backward Riccati sweep and an
// affine forward rollout, then accepts a fraction-to-boundary-limited step
// under an Armijo line search on an L1 merit function.
template <int NX, int NU>
class SqpSolver {
 public:
  using StateVec = Eigen::Matrix<double, NX, 1>;
  using InputVec = Eigen::Matrix<double, NU, 1>;
  using StateMat = Eigen::Matrix<double, NX, NX>;
  using GainMat = Eigen::Matrix<double, NX, NU>;
  using InputMat = Eigen::Matrix<double, NU, NU>;

  struct StageCost {
    double value = 0.0;
    StateVec gx = StateVec::Zero();
    InputVec gu = InputVec::Zero();
    StateMat Qxx = StateMat::Zero();  // Gauss-Newton approximation of d2/dx2
    InputMat Quu = InputMat::Zero();
  };

  struct TerminalCost {
    double value = 0.0;
    StateVec gx = StateVec::Zero();
    StateMat Qxx = StateMat::Zero();
  };

  struct Problem {
    int N = 0;
    StateVec x0 = StateVec::Zero();
    // x_next = f(k, x, u); when A/B are non-null they receive the Jacobians
    // of the discrete map.
    std::function<StateVec(int, const StateVec&, const InputVec&, StateMat*, GainMat*)>
        dynamics;
    // Cost on (x_k, u_k) for k = 0..N-1. The state x_0 is fixed, so charging
    // state tracking from k >= 1 plus terminal_cost keeps the objective free
    // of constants.
    std::function<StageCost(int, const StateVec&, const InputVec&)> stage_cost;
    std::function<TerminalCost(const StateVec&)> terminal_cost;
    StateVec x_lo = StateVec::Constant(-kInf);
    StateVec x_hi = StateVec::Constant(kInf);
    InputVec u_lo = InputVec::Constant(-kInf);
    InputVec u_hi = InputVec::Constant(kInf);
  };

  struct Trajectory {
    std::vector<StateVec> x;  // N+1 entries, x[0] = x0
    std::vector<InputVec> u;  // N entries
  };

  struct Result {
    Trajectory traj;
    SqpStatus status = SqpStatus::failed;
    int iterations = 0;
    double objective = 0.0;  // true cost at the returned iterate, barrier excluded
    double kkt = kInf;       // max of dynamics defect and scaled step size
    double defect_inf = kInf;
    // Merit before/after each accepted step, comparable within a pair.
    std::vector<std::pair<double, double>> merit_steps;
  };

  struct Settings {
    int max_iterations = 50;
    double tol = 1e-6;
    double mu_cold = 1e-2;
    double mu_warm = 1e-4;
    double mu_floor = 1e-9;
    double mu_decay = 0.2;
    double ftb = 0.995;  // fraction-to-boundary factor
  };

  Settings settings;

  Result solve(const Problem& pb, const Trajectory* warm = nullptr) const {
    Result res;
    const int N = pb.N;
    Trajectory traj;
    if (warm && static_cast<int>(warm->x.size()) == N + 1 &&
        static_cast<int>(warm->u.size()) == N) {
      traj = *warm;
    } else {
      traj.x.assign(N + 1, pb.x0);
      traj.u.assign(N, InputVec::Zero());
    }
    traj.x[0] = pb.x0;
    push_interior(pb, traj);

    double mu = warm ? settings.mu_warm : settings.mu_cold;
    double rho = 10.0;

    Evaluation ev;
    if (!evaluate(pb, traj, true, ev)) {
      res.traj = traj;
      res.status = SqpStatus::failed;
      return res;
    }

    double last_step = kInf;
    for (int iter = 0; iter < settings.max_iterations; ++iter) {
      res.iterations = iter;
      if (ev.defect_inf < settings.tol && last_step < settings.tol &&
          mu <= settings.mu_floor * 1.01) {
        res.status = SqpStatus::converged;
        break;
      }

      // Backward Riccati sweep over the quadratic model with barrier terms.
      std::vector<GainMat> K(N);
      std::vector<InputVec> kff(N);
      if (!backward_pass(pb, traj, ev, mu, K, kff)) {
        res.status = SqpStatus::failed;
        break;
      }

      // Affine forward rollout of the linearized dynamics.
      std::vector<StateVec> dx(N + 1, StateVec::Zero());
      std::vector<InputVec> du(N);
      double step_inf = 0.0;
      double traj_inf = 1.0;
      for (int k = 0; k < N; ++k) {
        du[k] = kff[k] + K[k].transpose() * dx[k];
        dx[k + 1] = ev.A[k] * dx[k] + ev.B[k] * du[k] + ev.defect[k];
        step_inf = std::max({step_inf, du[k].template lpNorm<Eigen::Infinity>(),
                             dx[k + 1].template lpNorm<Eigen::Infinity>()});
        traj_inf = std::max({traj_inf, traj.u[k].template lpNorm<Eigen::Infinity>(),
                             traj.x[k + 1].template lpNorm<Eigen::Infinity>()});
      }
      if (!std::isfinite(step_inf)) {
        res.status = SqpStatus::failed;
        break;
      }

      const double alpha_max = fraction_to_boundary(pb, traj, dx, du);

      // L1 merit line search. The model slope combines the cost+barrier
      // gradients with the exact defect-reduction term; rho grows until the
      // defect term makes the direction a descent direction for the merit.
      double grad_dot = 0.0;
      for (int k = 0; k < N; ++k) {
        grad_dot += (ev.cost[k].gx + mu * ev.bgx[k]).dot(dx[k]) +
                    (ev.cost[k].gu + mu * ev.bgu[k]).dot(du[k]);
      }
      grad_dot += (ev.terminal.gx + mu * ev.bgx[N]).dot(dx[N]);
      double slope = grad_dot - rho * ev.defect_l1;
      if (slope > -1e-16 && ev.defect_l1 > settings.tol) {
        rho = std::min(
            std::max(rho * 10.0, 2.0 * std::abs(grad_dot) / std::max(ev.defect_l1, 1e-12)),
            1e8);
        slope = grad_dot - rho * ev.defect_l1;
      }

      const double merit0 = merit(ev, mu, rho);
      double alpha = alpha_max;
      bool accepted = false;
      Trajectory trial;
      Evaluation trial_ev;
      for (int bt = 0; bt < 25; ++bt) {
        trial = traj;
        for (int k = 0; k < N; ++k) {
          trial.u[k] += alpha * du[k];
          trial.x[k + 1] += alpha * dx[k + 1];
        }
        if (evaluate(pb, trial, true, trial_ev)) {
          const double m1 = merit(trial_ev, mu, rho);
          if (m1 <= merit0 + 1e-4 * alpha * slope || m1 < merit0 - 1e-14 * std::abs(merit0)) {
            res.merit_steps.emplace_back(merit0, m1);
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        // The current barrier subproblem is solved as far as the line search
        // can tell. At the floor that is the answer; otherwise continue with
        // a weaker barrier from the same iterate.
        if (mu > settings.mu_floor * 1.01) {
          mu = std::max(settings.mu_floor, mu * settings.mu_decay);
          res.iterations = iter + 1;
          continue;
        }
        res.status = ev.defect_inf < settings.tol ? SqpStatus::converged
                                                  : SqpStatus::degraded;
        break;
      }

      traj = std::move(trial);
      ev = std::move(trial_ev);
      last_step = alpha * step_inf / traj_inf;
      mu = std::max(settings.mu_floor, mu * settings.mu_decay);
      res.iterations = iter + 1;
      if (res.iterations == settings.max_iterations) res.status = SqpStatus::degraded;
    }

    if (res.status != SqpStatus::failed) {
      res.traj = std::move(traj);
      res.objective = ev.objective;
      res.defect_inf = ev.defect_inf;
      res.kkt = std::max(ev.defect_inf, last_step);
      if (res.status != SqpStatus::converged && res.status != SqpStatus::degraded)
        res.status = SqpStatus::degraded;
    } else {
      res.traj = traj;
    }
    return res;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Evaluation {
    std::vector<StateMat> A;
    std::vector<GainMat> B;
    std::vector<StateVec> defect;
    std::vector<StageCost> cost;
    TerminalCost terminal;
    // Barrier gradient and diagonal Hessian per stage; bgx/bhx have N+1
    // entries (entry 0 unused, x_0 is fixed), bgu/bhu have N.
    std::vector<StateVec> bgx, bhx;
    std::vector<InputVec> bgu, bhu;
    double barrier = 0.0;
    double objective = 0.0;
    double defect_inf = 0.0;
    double defect_l1 = 0.0;
  };

  static double merit(const Evaluation& ev, double mu, double rho) {
    return ev.objective + mu * ev.barrier + rho * ev.defect_l1;
  }

  // Accumulates the unit-weight barrier value plus gradient and curvature for
  // one vector against its box; returns false when outside the box.
  template <typename Vec>
  static bool barrier_vec(const Vec& v, const Vec& lo, const Vec& hi, double& value, Vec& grad,
                          Vec& hess) {
    grad.setZero();
    hess.setZero();
    for (int i = 0; i < Vec::RowsAtCompileTime; ++i) {
      if (std::isfinite(lo(i))) {
        const double d = v(i) - lo(i);
        if (!(d > 0.0)) return false;
        value -= std::log(d);
        grad(i) -= 1.0 / d;
        hess(i) += 1.0 / (d * d);
      }
      if (std::isfinite(hi(i))) {
        const double d = hi(i) - v(i);
        if (!(d > 0.0)) return false;
        value -= std::log(d);
        grad(i) += 1.0 / d;
        hess(i) += 1.0 / (d * d);
      }
    }
    return true;
  }

  bool evaluate(const Problem& pb, const Trajectory& traj, bool with_derivs,
                Evaluation& ev) const {
    const int N = pb.N;
    ev.A.assign(N, StateMat::Zero());
    ev.B.assign(N, GainMat::Zero());
    ev.defect.assign(N, StateVec::Zero());
    ev.cost.assign(N, StageCost{});
    ev.bgx.assign(N + 1, StateVec::Zero());
    ev.bhx.assign(N + 1, StateVec::Zero());
    ev.bgu.assign(N, InputVec::Zero());
    ev.bhu.assign(N, InputVec::Zero());
    ev.barrier = 0.0;
    ev.objective = 0.0;
    ev.defect_inf = 0.0;
    ev.defect_l1 = 0.0;

    for (int k = 0; k < N; ++k) {
      const StateVec pred = pb.dynamics(k, traj.x[k], traj.u[k],
                                        with_derivs ? &ev.A[k] : nullptr,
                                        with_derivs ? &ev.B[k] : nullptr);
      ev.defect[k] = pred - traj.x[k + 1];
      ev.defect_inf = std::max(ev.defect_inf, ev.defect[k].template lpNorm<Eigen::Infinity>());
      ev.defect_l1 += ev.defect[k].template lpNorm<1>();
      ev.cost[k] = pb.stage_cost(k, traj.x[k], traj.u[k]);
      ev.objective += ev.cost[k].value;
      if (!barrier_vec(traj.u[k], pb.u_lo, pb.u_hi, ev.barrier, ev.bgu[k], ev.bhu[k]))
        return false;
      if (k >= 1 &&
          !barrier_vec(traj.x[k], pb.x_lo, pb.x_hi, ev.barrier, ev.bgx[k], ev.bhx[k]))
        return false;
    }
    ev.terminal = pb.terminal_cost(traj.x[N]);
    ev.objective += ev.terminal.value;
    if (!barrier_vec(traj.x[N], pb.x_lo, pb.x_hi, ev.barrier, ev.bgx[N], ev.bhx[N]))
      return false;
    if (!std::isfinite(ev.objective) || !std::isfinite(ev.defect_l1)) return false;
    if (with_derivs) {
      for (int k = 0; k < N; ++k)
        if (!ev.A[k].allFinite() || !ev.B[k].allFinite()) return false;
    }
    return true;
  }

  bool backward_pass(const Problem& pb, const Trajectory& traj, const Evaluation& ev, double mu,
                     std::vector<GainMat>& K, std::vector<InputVec>& kff) const {
    (void)traj;
    const int N = pb.N;
    StateMat P = ev.terminal.Qxx;
    P.diagonal() += mu * ev.bhx[N];
    StateVec p = ev.terminal.gx + mu * ev.bgx[N];

    for (int k = N - 1; k >= 0; --k) {
      const StateMat& A = ev.A[k];
      const GainMat& B = ev.B[k];
      InputMat H = ev.cost[k].Quu + B.transpose() * P * B;
      H.diagonal() += mu * ev.bhu[k];
      const Eigen::Matrix<double, NU, NX> G = B.transpose() * P * A;
      const InputVec h =
          ev.cost[k].gu + mu * ev.bgu[k] + B.transpose() * (P * ev.defect[k] + p);

      Eigen::LLT<InputMat> llt;
      double damping = 0.0;
      for (int attempt = 0; attempt < 12; ++attempt) {
        InputMat Hd = H;
        Hd.diagonal().array() += damping;
        llt.compute(Hd);
        if (llt.info() == Eigen::Success) {
          H = Hd;
          break;
        }
        damping = damping == 0.0 ? 1e-10 * std::max(1.0, H.trace()) : damping * 10.0;
      }
      if (llt.info() != Eigen::Success) return false;

      K[k] = -llt.solve(G).transpose();  // stored as NX x NU, used transposed
      kff[k] = -llt.solve(h);

      StateMat Qxx = ev.cost[k].Qxx;
      StateVec gx = ev.cost[k].gx;
      if (k >= 1) {
        Qxx.diagonal() += mu * ev.bhx[k];
        gx += mu * ev.bgx[k];
      }
      const StateMat Pn = Qxx + A.transpose() * P * A + G.transpose() * K[k].transpose();
      p = gx + A.transpose() * (P * (B * kff[k] + ev.defect[k]) + p);
      P = 0.5 * (Pn + Pn.transpose());
      if (!P.allFinite() || !p.allFinite()) return false;
    }
    return true;
  }

  double fraction_to_boundary(const Problem& pb, const Trajectory& traj,
                              const std::vector<StateVec>& dx,
                              const std::vector<InputVec>& du) const {
    double alpha = 1.0;
    auto limit = [&](double cur, double lo, double hi, double d) {
      if (d < 0.0 && std::isfinite(lo)) alpha = std::min(alpha, settings.ftb * (cur - lo) / -d);
      if (d > 0.0 && std::isfinite(hi)) alpha = std::min(alpha, settings.ftb * (hi - cur) / d);
    };
    for (int k = 0; k < pb.N; ++k) {
      for (int i = 0; i < NU; ++i) limit(traj.u[k](i), pb.u_lo(i), pb.u_hi(i), du[k](i));
      for (int i = 0; i < NX; ++i)
        limit(traj.x[k + 1](i), pb.x_lo(i), pb.x_hi(i), dx[k + 1](i));
    }
    return std::max(alpha, 0.0);
  }

  // Moves a warm or cold start strictly inside the box so the barrier is
  // finite at the first evaluation.
  static void push_interior(const Problem& pb, Trajectory& traj) {
    auto nudge = [](double v, double lo, double hi) {
      const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
      if (flo && fhi) {
        const double m = std::min(1e-6 * (hi - lo), 0.25 * (hi - lo));
        return std::clamp(v, lo + m, hi - m);
      }
      if (flo) return std::max(v, lo + 1e-9 * std::max(1.0, std::abs(lo)));
      if (fhi) return std::min(v, hi - 1e-9 * std::max(1.0, std::abs(hi)));
      return v;
    };
    for (size_t k = 1; k < traj.x.size(); ++k)
      for (int i = 0; i < NX; ++i) traj.x[k](i) = nudge(traj.x[k](i), pb.x_lo(i), pb.x_hi(i));
    for (auto& u : traj.u)
      for (int i = 0; i < NU; ++i) u(i) = nudge(u(i), pb.u_lo(i), pb.u_hi(i));
  }
};

}  // namespace lmpcc
