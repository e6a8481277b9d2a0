#include "mheat/levelset.hpp"

#include <algorithm>
#include <cmath>

#include "mheat/errors.hpp"

namespace mheat {

bool verify_containment(const LevelSetField& field, const SpaceTimeBox& box,
                        int samples_per_axis, int time_samples) {
  const int d = field.dim;
  const double a = box.a;
  for (int k = 0; k < time_samples; ++k) {
    const double t = time_samples == 1
                         ? box.t_begin
                         : box.t_begin + (box.t_end - box.t_begin) * k / (time_samples - 1);
    for (int axis = 0; axis < d; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const double face = side == 0 ? -a : a;
        const int m = samples_per_axis;
        const int inner = d == 2 ? m : m * m;
        for (int s = 0; s < inner; ++s) {
          Vec x{0.0, 0.0, 0.0};
          x[axis] = face;
          const int i = s % m;
          const int j = s / m;
          int slot = 0;
          for (int ax = 0; ax < d; ++ax) {
            if (ax == axis) continue;
            const int idx = slot == 0 ? i : j;
            x[ax] = -a + 2.0 * a * idx / (m - 1);
            ++slot;
          }
          if (field.eval(x, t) < 0.0) return false;
        }
      }
    }
  }
  return true;
}

LevelSetField make_normal_form(int dim, int q, int sgn) {
  if (dim != 2 && dim != 3) throw argument_error("normal form: dim must be 2 or 3");
  if (q < 0 || q > dim) throw argument_error("normal form: need 0 <= q <= dim");
  if (sgn != 1 && sgn != -1) throw argument_error("normal form: sgn must be +1 or -1");

  LevelSetField f;
  f.dim = dim;
  f.kind = FieldKind::normal_form;
  f.q = q;
  f.sgn = sgn;
  const double s = static_cast<double>(sgn);
  f.eval = [dim, q, s](const Vec& x, double t) {
    double v = s * t;
    for (int i = 0; i < dim; ++i) v += (i < q ? -1.0 : 1.0) * x[i] * x[i];
    return v;
  };
  f.grad = [dim, q](const Vec& x, double) {
    Vec g{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) g[i] = 2.0 * (i < q ? -1.0 : 1.0) * x[i];
    return g;
  };
  f.hess = [dim, q](const Vec&, double) {
    Mat h{};
    for (int i = 0; i < dim; ++i) h[i][i] = 2.0 * (i < q ? -1.0 : 1.0);
    return h;
  };
  f.dphi_dt = [s](const Vec&, double) { return s; };
  return f;
}

LevelSetField make_analytic_field(int dim, double t_begin, double t_end,
                                  std::function<double(const Vec&, double)> eval,
                                  std::function<Vec(const Vec&, double)> grad,
                                  std::function<Mat(const Vec&, double)> hess,
                                  std::function<double(const Vec&, double)> dphi_dt) {
  if (dim != 2 && dim != 3) throw argument_error("analytic field: dim must be 2 or 3");
  LevelSetField f;
  f.dim = dim;
  f.t_begin = t_begin;
  f.t_end = t_end;
  f.eval = std::move(eval);
  f.grad = std::move(grad);
  f.hess = std::move(hess);
  f.dphi_dt = std::move(dphi_dt);
  return f;
}

LevelSetField make_analytic_field_fd(int dim, double t_begin, double t_end,
                                     std::function<double(const Vec&, double)> eval,
                                     double scale) {
  if (dim != 2 && dim != 3) throw argument_error("analytic field: dim must be 2 or 3");
  LevelSetField f;
  f.dim = dim;
  f.t_begin = t_begin;
  f.t_end = t_end;
  f.fd_derivatives = true;
  f.scale = scale;
  const double h = 1e-5 * scale;
  auto ev = eval;
  f.eval = eval;
  f.grad = [dim, h, ev](const Vec& x, double t) {
    Vec g{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g[i] = (ev(xp, t) - ev(xm, t)) / (2.0 * h);
    }
    return g;
  };
  f.hess = [dim, h, ev](const Vec& x, double t) {
    Mat m{};
    const double c = ev(x, t);
    for (int i = 0; i < dim; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      m[i][i] = (ev(xp, t) - 2.0 * c + ev(xm, t)) / (h * h);
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        m[i][j] = m[j][i] =
            (ev(xpp, t) - ev(xpm, t) - ev(xmp, t) + ev(xmm, t)) / (4.0 * h * h);
      }
    }
    return m;
  };
  f.dphi_dt = [h, ev](const Vec& x, double t) {
    return (ev(x, t + h) - ev(x, t - h)) / (2.0 * h);
  };
  return f;
}

LevelSetField windowed(const LevelSetField& field, double r0) {
  if (!(r0 > 0.0)) throw argument_error("windowed: r0 must be positive");
  LevelSetField f = field;
  const int dim = field.dim;
  const double r2 = r0 * r0;
  auto inner = field;  // copies the std::functions
  auto win = [dim, r2](const Vec& x, double) {
    double s = -r2;
    for (int i = 0; i < dim; ++i) s += x[i] * x[i];
    return s;
  };
  f.eval = [inner, win](const Vec& x, double t) {
    return std::max(inner.eval(x, t), win(x, t));
  };
  f.grad = [inner, win, dim](const Vec& x, double t) {
    if (inner.eval(x, t) >= win(x, t)) return inner.grad(x, t);
    Vec g{0.0, 0.0, 0.0};
    for (int i = 0; i < dim; ++i) g[i] = 2.0 * x[i];
    return g;
  };
  f.hess = [inner, win, dim](const Vec& x, double t) {
    if (inner.eval(x, t) >= win(x, t)) return inner.hess(x, t);
    Mat h{};
    for (int i = 0; i < dim; ++i) h[i][i] = 2.0;
    return h;
  };
  f.dphi_dt = [inner, win](const Vec& x, double t) {
    if (inner.eval(x, t) >= win(x, t)) return inner.dphi_dt(x, t);
    return 0.0;
  };
  return f;
}

std::span<const ScenarioSpec> scenario_catalog() {
  // (dim, q, sgn) per transition type; island cases live on one-sided time
  // intervals so the domain exists on the whole interval.
  static const std::vector<ScenarioSpec> catalog = {
      {"island2d-create", 2, 0, -1, 0.0, 1.0},
      {"island2d-vanish", 2, 0, +1, -1.0, 0.0},
      {"split2d", 2, 1, +1, -1.0, 1.0},
      {"merge2d", 2, 1, -1, -1.0, 1.0},
      {"hole2d-create", 2, 2, +1, -1.0, 1.0},
      {"hole2d-vanish", 2, 2, -1, -1.0, 1.0},
      {"island3d-create", 3, 0, -1, 0.0, 1.0},
      {"island3d-vanish", 3, 0, +1, -1.0, 0.0},
      {"split3d", 3, 1, +1, -1.0, 1.0},
      {"merge3d", 3, 1, -1, -1.0, 1.0},
      {"holethrough3d-create", 3, 2, +1, -1.0, 1.0},
      {"holethrough3d-vanish", 3, 2, -1, -1.0, 1.0},
      {"void3d-create", 3, 3, +1, -1.0, 1.0},
      {"void3d-vanish", 3, 3, -1, -1.0, 1.0},
  };
  return catalog;
}

const ScenarioSpec& scenario_spec(const std::string& name) {
  for (const auto& s : scenario_catalog())
    if (s.name == name) return s;
  throw argument_error("unknown scenario: " + name);
}

LevelSetField make_scenario(const std::string& name) {
  const ScenarioSpec& s = scenario_spec(name);
  LevelSetField f = make_normal_form(s.dim, s.q, s.sgn);
  f.t_begin = s.t_begin;
  f.t_end = s.t_end;
  return f;
}

LevelSetField make_scenario_windowed(const std::string& name, double box_halfwidth) {
  if (!(box_halfwidth > 0.0)) throw argument_error("scenario window: box halfwidth must be positive");
  return windowed(make_scenario(name), 0.8 * box_halfwidth);
}

double DerivativeReport::max() const {
  return std::max(max_grad_err, std::max(max_hess_err, max_dt_err));
}

DerivativeReport check_derivative_consistency(
    const LevelSetField& field, std::span<const std::pair<Vec, double>> samples,
    double step) {
  DerivativeReport rep;
  rep.fd_derivatives = field.fd_derivatives;
  const int d = field.dim;
  const double h = step;
  auto rel = [](double err, double ref) { return err / std::max(1.0, std::abs(ref)); };
  for (const auto& [x, t] : samples) {
    const Vec g = field.grad(x, t);
    for (int i = 0; i < d; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (field.eval(xp, t) - field.eval(xm, t)) / (2.0 * h);
      rep.max_grad_err = std::max(rep.max_grad_err, rel(std::abs(fd - g[i]), fd));
    }
    const double pt = field.dphi_dt(x, t);
    const double fdt = (field.eval(x, t + h) - field.eval(x, t - h)) / (2.0 * h);
    rep.max_dt_err = std::max(rep.max_dt_err, rel(std::abs(fdt - pt), fdt));

    const Mat m = field.hess(x, t);
    const double c = field.eval(x, t);
    for (int i = 0; i < d; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (field.eval(xp, t) - 2.0 * c + field.eval(xm, t)) / (h * h);
      rep.max_hess_err = std::max(rep.max_hess_err, rel(std::abs(fd - m[i][i]), fd));
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        const double fd = (field.eval(xpp, t) - field.eval(xpm, t) -
                           field.eval(xmp, t) + field.eval(xmm, t)) /
                          (4.0 * h * h);
        rep.max_hess_err = std::max(rep.max_hess_err, rel(std::abs(fd - m[i][j]), fd));
      }
    }
  }
  return rep;
}

Vec normal_velocity(const LevelSetField& field, const Vec& x, double t) {
  const double phi = field.eval(x, t);
  const double tol_surface = 1e-8 * (1.0 + dot(x, x, field.dim));
  if (std::abs(phi) >= tol_surface)
    throw argument_error("normal_velocity: point is not on Gamma(t)");
  const Vec g = field.grad(x, t);
  const double g2 = dot(g, g, field.dim);
  const double tol_grad = 1e-8;
  if (std::sqrt(g2) <= tol_grad)
    throw degenerate_point_error(
        "normal_velocity: |grad phi| vanishes; velocity unbounded near the critical point");
  const double pt = field.dphi_dt(x, t);
  return scale(-pt / g2, g, field.dim);
}

}  // namespace mheat
