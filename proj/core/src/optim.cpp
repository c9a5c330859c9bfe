#include "rsmboot/optim.hpp"

#include <algorithm>
#include <cmath>

namespace rsmboot {

void NelderMeadConfig::validate() const {
  if (!(reflection > 0.0)) throw std::invalid_argument("NelderMeadConfig: reflection must be > 0");
  if (!(expansion > 1.0)) throw std::invalid_argument("NelderMeadConfig: expansion must be > 1");
  if (!(contraction > 0.0 && contraction < 1.0))
    throw std::invalid_argument("NelderMeadConfig: contraction must be in (0,1)");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("NelderMeadConfig: shrink must be in (0,1)");
  if (max_iterations < 1) throw std::invalid_argument("NelderMeadConfig: max_iterations >= 1");
  if (restarts < 0) throw std::invalid_argument("NelderMeadConfig: restarts >= 0");
}

namespace {

struct Vertex {
  Eigen::Vector2d x;
  double f;
};

double simplex_diameter(const std::array<Vertex, 3>& s) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      d = std::max(d, (s[i].x - s[j].x).cwiseAbs().maxCoeff());
  return d;
}

void sort_simplex(std::array<Vertex, 3>& s) {
  // Descending by value (maximization); stable so ties keep insertion order.
  std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
}

// One Nelder-Mead run; returns true if it converged within the budget.
bool run_simplex(const Objective& objective, const Region& region,
                 const NelderMeadConfig& config, const Eigen::Vector2d& start, double step_frac,
                 Vertex& best_out) {
  const auto eval = [&](const Eigen::Vector2d& x) { return Vertex{x, objective(x)}; };

  std::array<Vertex, 3> simplex;
  simplex[0] = eval(region.clamp(start));
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d v = simplex[0].x;
    double step = step_frac * region.width(j);
    if (v[j] + step > region.hi[j]) step = -step;  // step inward from a bound
    v[j] += step;
    simplex[j + 1] = eval(region.clamp(v));
  }
  sort_simplex(simplex);

  bool converged = false;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (simplex_diameter(simplex) <= config.diameter_tol ||
        simplex[0].f - simplex[2].f <= config.value_tol) {
      converged = true;
      break;
    }
    const Eigen::Vector2d centroid = 0.5 * (simplex[0].x + simplex[1].x);
    const auto trial = [&](double coef) {
      return eval(region.clamp(centroid + coef * (centroid - simplex[2].x)));
    };

    const Vertex reflected = trial(config.reflection);
    if (reflected.f > simplex[0].f) {
      const Vertex expanded = trial(config.reflection * config.expansion);
      simplex[2] = expanded.f > reflected.f ? expanded : reflected;
    } else if (reflected.f > simplex[1].f) {
      simplex[2] = reflected;
    } else {
      const bool outside = reflected.f > simplex[2].f;
      const Vertex contracted =
          outside ? trial(config.reflection * config.contraction) : trial(-config.contraction);
      if (contracted.f > (outside ? reflected.f : simplex[2].f)) {
        simplex[2] = contracted;
      } else {
        for (int i = 1; i < 3; ++i)
          simplex[i] =
              eval(region.clamp(simplex[0].x + config.shrink * (simplex[i].x - simplex[0].x)));
      }
    }
    sort_simplex(simplex);
  }
  best_out = simplex[0];
  return converged;
}

}  // namespace

ConstrainedMaximum nelder_mead_max(const Objective& objective, const Region& region,
                                   const NelderMeadConfig& config,
                                   const std::vector<Eigen::Vector2d>& starts) {
  config.validate();
  bool any_inside = false;
  for (const auto& s : starts) any_inside = any_inside || region.contains(s);
  if (!any_inside)
    throw std::invalid_argument("nelder_mead_max: at least one start must be inside the region");

  bool have_best = false;
  Vertex best{Eigen::Vector2d::Zero(), 0.0};
  bool any_converged = false;
  for (const auto& start : starts) {
    Vertex candidate{Eigen::Vector2d::Zero(), 0.0};
    bool conv = run_simplex(objective, region, config, start, 0.05, candidate);
    for (int r = 0; r < config.restarts; ++r) {
      Vertex refined{Eigen::Vector2d::Zero(), 0.0};
      const bool rconv = run_simplex(objective, region, config, candidate.x, 0.005, refined);
      if (refined.f > candidate.f) candidate = refined;
      conv = conv && rconv;
    }
    any_converged = any_converged || conv;
    if (!have_best || candidate.f > best.f) {
      best = candidate;
      have_best = true;
    }
  }

  ConstrainedMaximum out;
  out.point = best.x;
  for (int j = 0; j < 2; ++j) {
    const double snap = kBoundarySnapFraction * region.width(j);
    if (out.point[j] - region.lo[j] <= snap) {
      out.point[j] = region.lo[j];
      out.on_boundary[j] = BoundaryFlag::kAtLo;
    } else if (region.hi[j] - out.point[j] <= snap) {
      out.point[j] = region.hi[j];
      out.on_boundary[j] = BoundaryFlag::kAtHi;
    }
  }
  out.value = objective(out.point);
  out.converged = any_converged;
  return out;
}

namespace {

struct Candidate {
  Eigen::Vector2d x;
  std::array<BoundaryFlag, 2> flags;
};

// Maximum of the univariate restriction g(edge coordinate fixed) in closed
// form: vertex when concave and interior, otherwise the better endpoint.
void edge_candidates(const QuadraticModel& model, const Region& region, int fixed_coord,
                     double fixed_value, BoundaryFlag fixed_flag, std::vector<Candidate>& out) {
  const int free_coord = 1 - fixed_coord;
  // Restriction y(t) = a t^2 + b t + const along the free coordinate.
  const double a = free_coord == 0 ? model.b11 : model.b22;
  const double b = model.beta[free_coord] + model.b12 * fixed_value;
  if (a < 0.0) {
    const double t = -b / (2.0 * a);
    if (t > region.lo[free_coord] && t < region.hi[free_coord]) {
      Candidate c;
      c.x[fixed_coord] = fixed_value;
      c.x[free_coord] = t;
      c.flags[fixed_coord] = fixed_flag;
      c.flags[free_coord] = BoundaryFlag::kInterior;
      out.push_back(c);
    }
  }
}

}  // namespace

std::vector<ConstrainedMaximum> quadratic_box_max_exact(const QuadraticModel& model,
                                                        const Region& region) {
  std::vector<Candidate> candidates;

  if (!b_is_singular(model)) {
    const Eigen::Vector2d sp = stationary_point(model);
    if (sp[0] > region.lo[0] && sp[0] < region.hi[0] && sp[1] > region.lo[1] &&
        sp[1] < region.hi[1]) {
      candidates.push_back({sp, {BoundaryFlag::kInterior, BoundaryFlag::kInterior}});
    }
  }
  for (int j = 0; j < 2; ++j) {
    edge_candidates(model, region, j, region.lo[j], BoundaryFlag::kAtLo, candidates);
    edge_candidates(model, region, j, region.hi[j], BoundaryFlag::kAtHi, candidates);
  }
  for (const double x1 : {region.lo[0], region.hi[0]}) {
    for (const double x2 : {region.lo[1], region.hi[1]}) {
      Candidate c;
      c.x = {x1, x2};
      c.flags[0] = x1 == region.lo[0] ? BoundaryFlag::kAtLo : BoundaryFlag::kAtHi;
      c.flags[1] = x2 == region.lo[1] ? BoundaryFlag::kAtLo : BoundaryFlag::kAtHi;
      candidates.push_back(c);
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::max(best, model.value(c.x));

  std::vector<ConstrainedMaximum> maxima;
  for (const auto& c : candidates) {
    const double v = model.value(c.x);
    if (v < best - 1e-9) continue;
    const bool duplicate = std::any_of(maxima.begin(), maxima.end(), [&](const auto& m) {
      return (m.point - c.x).cwiseAbs().maxCoeff() <= 1e-9;
    });
    if (duplicate) continue;
    ConstrainedMaximum m;
    m.point = c.x;
    m.value = v;
    m.on_boundary = c.flags;
    maxima.push_back(m);
  }
  std::sort(maxima.begin(), maxima.end(), [](const auto& a, const auto& b) {
    return a.point[0] != b.point[0] ? a.point[0] < b.point[0] : a.point[1] < b.point[1];
  });
  return maxima;
}

ConstrainedMaximum constrained_max(const QuadraticModel& model, const Region& region,
                                   const NelderMeadConfig& config) {
  std::vector<Eigen::Vector2d> starts;
  starts.push_back(region.center());
  const Eigen::Vector2d c = region.center();
  for (const double x1 : {region.lo[0], region.hi[0]}) {
    for (const double x2 : {region.lo[1], region.hi[1]}) {
      const Eigen::Vector2d corner{x1, x2};
      starts.push_back(c + 0.9 * (corner - c));  // corners pulled 10% inward
    }
  }
  if (!b_is_singular(model)) starts.push_back(region.clamp(stationary_point(model)));
  return nelder_mead_max([&model](const Eigen::Vector2d& x) { return model.value(x); }, region,
                         config, starts);
}

}  // namespace rsmboot
