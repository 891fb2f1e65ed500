#include "neurowire/fem.hpp"

#include <cmath>
#include <numbers>

#include "neurowire/errors.hpp"

namespace neurowire {

namespace {

template <class ElementMatrix>
SparseMatrix assemble(const PeriodicGrid& grid, ElementMatrix&& local) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(grid.element_count() * 9);
  for (std::size_t e = 0; e < grid.element_count(); ++e) {
    const auto nodes = grid.element_nodes(e);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        triplets.emplace_back(static_cast<int>(nodes[a]), static_cast<int>(nodes[b]), local(e, a, b));
      }
    }
  }
  const auto n = static_cast<int>(grid.node_count());
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

// Dunavant degree-5 rule: barycentric points and weights (summing to 1).
constexpr double kA1 = 0.059715871789770;
constexpr double kB1 = 0.470142064105115;
constexpr double kA2 = 0.797426985353087;
constexpr double kB2 = 0.101286507323456;
constexpr double kW0 = 0.225;
constexpr double kW1 = 0.132394152788506;
constexpr double kW2 = 0.125939180544827;

constexpr std::array<std::array<double, 3>, 7> kBary{{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
    {kA1, kB1, kB1}, {kB1, kA1, kB1}, {kB1, kB1, kA1},
    {kA2, kB2, kB2}, {kB2, kA2, kB2}, {kB2, kB2, kA2},
}};
constexpr std::array<double, 7> kWeights{kW0, kW1, kW1, kW1, kW2, kW2, kW2};

// Anything below this relative to the peak is dropped from the load vector.
constexpr double kNegligible = 1e-17;

}  // namespace

SparseMatrix assemble_mass(const PeriodicGrid& grid) {
  const double area = grid.element_area();
  return assemble(grid, [area](std::size_t, int a, int b) {
    return area / 12.0 * (a == b ? 2.0 : 1.0);
  });
}

SparseMatrix assemble_laplacian(const PeriodicGrid& grid) {
  const double area = grid.element_area();
  return assemble(grid, [&grid, area](std::size_t e, int a, int b) {
    const auto g = grid.basis_gradients(e);
    return area * (g[a].x * g[b].x + g[a].y * g[b].y);
  });
}

SparseMatrix assemble_stiffness(const PeriodicGrid& grid, double D, double lambda, DecayPolicy policy) {
  if (!(D > 0.0)) throw DomainError("assemble_stiffness: D must be positive");
  if (policy == DecayPolicy::RequirePositive ? !(lambda > 0.0) : !(lambda >= 0.0)) {
    throw DomainError("assemble_stiffness: lambda must be positive");
  }
  SparseMatrix b = D * assemble_laplacian(grid);
  if (lambda != 0.0) b += lambda * assemble_mass(grid);
  b.makeCompressed();
  return b;
}

double Mollifier::operator()(Vec2 x) const {
  return std::exp(-(x.x * x.x + x.y * x.y) / (4.0 * epsilon)) / (4.0 * std::numbers::pi * epsilon);
}

SourceAssembler::SourceAssembler(const PeriodicGrid& grid, Mollifier mollifier)
    : grid_(grid), mollifier_(mollifier) {
  if (!(mollifier.epsilon > 0.0)) throw DomainError("mollifier: epsilon must be positive");
  for (int p = 0; p < 7; ++p) {
    const auto& l = kBary[p];
    // Lower triangle vertices (0,0), (1,0), (1,1); upper (0,0), (1,1), (0,1).
    qx_[0][p] = l[1] + l[2];
    qy_[0][p] = l[2];
    qx_[1][p] = l[1];
    qy_[1][p] = l[1] + l[2];
    basis_[0][p] = l;
    basis_[1][p] = l;
    qw_[p] = kWeights[p];
  }
}

void SourceAssembler::accumulate(Vec2 position, std::span<const double> scale,
                                 std::span<Eigen::VectorXd> out) const {
  const Vec2 x = grid_.wrap(position);
  const std::size_t n = grid_.cells_per_axis();
  const double h = grid_.spacing();
  const double L = grid_.half_length();
  const double period = grid_.period();
  const double inv4e = 1.0 / (4.0 * mollifier_.epsilon);

  // The image sum over the 3×3 lattice factorises into x and y sums.
  // g[axis][cell][kind][point]
  auto profile = [&](double centre, const std::array<std::array<double, 7>, 2>& offsets,
                     std::vector<double>& g, std::vector<double>& peak) {
    g.assign(n * 14, 0.0);
    peak.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      const double base = -L + static_cast<double>(c) * h;
      for (int kind = 0; kind < 2; ++kind) {
        for (int p = 0; p < 7; ++p) {
          const double coord = base + h * offsets[kind][p] - centre;
          double sum = 0.0;
          for (int image = -1; image <= 1; ++image) {
            const double d = coord + image * period;
            sum += std::exp(-d * d * inv4e);
          }
          g[c * 14 + kind * 7 + p] = sum;
          peak[c] = std::max(peak[c], sum);
        }
      }
    }
  };
  std::vector<double> gx, gy, px, py;
  profile(x.x, qx_, gx, px);
  profile(x.y, qy_, gy, py);

  const double norm = grid_.element_area() / (4.0 * std::numbers::pi * mollifier_.epsilon);
  // weights[kind][a][p] = w_p φ_a(x_p) · g_y for the current row
  std::array<std::array<std::array<double, 7>, 3>, 2> weights{};
  for (std::size_t cj = 0; cj < n; ++cj) {
    if (py[cj] < kNegligible) continue;
    const std::size_t row = cj * n;
    const std::size_t row_up = (cj + 1 == n ? 0 : cj + 1) * n;
    for (int kind = 0; kind < 2; ++kind) {
      for (int a = 0; a < 3; ++a) {
        for (int p = 0; p < 7; ++p) weights[kind][a][p] = norm * qw_[p] * basis_[kind][p][a] * gy[cj * 14 + kind * 7 + p];
      }
    }
    for (std::size_t ci = 0; ci < n; ++ci) {
      if (px[ci] < kNegligible) continue;
      const std::size_t right = ci + 1 == n ? 0 : ci + 1;
      for (int kind = 0; kind < 2; ++kind) {
        const double* g = &gx[ci * 14 + kind * 7];
        std::array<double, 3> local{};
        for (int a = 0; a < 3; ++a) {
          const auto& w = weights[kind][a];
          double v = 0.0;
          for (int p = 0; p < 7; ++p) v += w[p] * g[p];
          local[a] = v;
        }
        // Same node order as PeriodicGrid::element_nodes.
        const std::array<std::size_t, 3> nodes =
            kind == 0 ? std::array<std::size_t, 3>{row + ci, row + right, row_up + right}
                      : std::array<std::size_t, 3>{row + ci, row_up + right, row_up + ci};
        for (std::size_t s = 0; s < scale.size(); ++s) {
          if (scale[s] == 0.0) continue;
          for (int a = 0; a < 3; ++a) out[s][static_cast<Eigen::Index>(nodes[a])] += scale[s] * local[a];
        }
      }
    }
  }
}

Eigen::VectorXd SourceAssembler::unit_load(Vec2 position) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_.node_count()));
  const double one = 1.0;
  accumulate(position, std::span<const double>(&one, 1), std::span<Eigen::VectorXd>(&f, 1));
  return f;
}

Eigen::VectorXd assemble_source(const PeriodicGrid& grid, const Mollifier& mollifier,
                                std::span<const PointSource> sources) {
  SourceAssembler assembler(grid, mollifier);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.node_count()));
  for (const auto& s : sources) {
    if (!s.active || s.amplitude == 0.0) continue;
    assembler.accumulate(s.position, std::span<const double>(&s.amplitude, 1),
                         std::span<Eigen::VectorXd>(&f, 1));
  }
  return f;
}

}  // namespace neurowire
