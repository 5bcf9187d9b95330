#include "hydrolax/residuals.hpp"

#include <algorithm>
#include <cstdio>

#include "hydrolax/kernels.hpp"

namespace hydrolax {

std::string_view backend_name(Backend b) {
  return b == Backend::Symbolic ? "symbolic" : "fd";
}

std::string_view tag_name(EquationTag tag) {
  switch (tag) {
    case EquationTag::LamX0: return "lamx0";
    case EquationTag::LamX1: return "lamx1";
    case EquationTag::LamX2: return "lamx2";
    case EquationTag::Lam3: return "lam3";
    case EquationTag::Lam00: return "lam00";
    case EquationTag::Resolved: return "resolved";
  }
  return "?";
}

void ProblemSpec::validate(bool check_pencil_distinct) const {
  if (frame.dim < 2) throw ConfigError("dimension must be at least 2");
  validate_frame(frame, grid);
  if (nl1 && !pencil)
    throw ConfigError("bracket-1 nonlocal data requires a pencil section");
  for (const auto& e : nl2.expanded(frame))
    if (static_cast<int>(e.H.size()) != frame.dim)
      throw ConfigError("nonlocal2 entry has wrong number of fields");
  if (pencil) {
    if (check_pencil_distinct) {
      validate_pencil(*pencil, frame.dim, grid);
    } else {
      PencilSpec copy = *pencil;
      // structural checks only; the caller owns the gap check
      if (static_cast<int>(copy.f.size()) != frame.dim)
        throw ConfigError("pencil: wrong number of eigenvalue functions");
      if (static_cast<int>(copy.eps1.size()) != frame.dim)
        throw ConfigError("pencil: wrong number of signs");
    }
  }
  if (nl1) {
    for (const auto& e : nl1->expanded(frame))
      if (static_cast<int>(e.H.size()) != frame.dim)
        throw ConfigError("nonlocal1 entry has wrong number of fields");
  }
  for (const auto& bp : beta_perturbations)
    if (bp.i < 0 || bp.i >= frame.dim || bp.j < 0 || bp.j >= frame.dim || bp.i == bp.j)
      throw ConfigError("beta perturbation indices out of range");
}

std::vector<EquationTag> applicable_tags(const ProblemSpec& p) {
  std::vector<EquationTag> tags{EquationTag::LamX0, EquationTag::LamX1, EquationTag::LamX2};
  if (p.pencil) {
    tags.push_back(EquationTag::Lam3);
    tags.push_back(EquationTag::Lam00);
  }
  return tags;
}

const ResidualEntry& ResidualReport::by_tag(EquationTag tag) const {
  for (const auto& e : entries)
    if (e.tag == tag) return e;
  throw ConfigError("no residual entry for tag " + std::string(tag_name(tag)));
}

bool ResidualReport::has_tag(EquationTag tag) const {
  for (const auto& e : entries)
    if (e.tag == tag) return true;
  return false;
}

double ResidualReport::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_abs);
  return m;
}

std::string ResidualReport::to_lines() const {
  std::string out;
  char buf[64];
  for (const auto& e : entries) {
    out += "RESID ";
    out += tag_name(e.tag);
    std::snprintf(buf, sizeof buf, " max=%.5e at=(", e.max_abs);
    out += buf;
    out += format_coords(e.at);
    out += ")\n";
  }
  return out;
}

namespace {

/// Backend-matched problem data: frame, beta (with raw offsets applied),
/// expanded nonlocal entries and pencil fields.
struct Prepared {
  LameFrame frame;
  RotationCoefficients beta;
  std::vector<NonlocalEntry> nl2;
  std::vector<NonlocalEntry> nl1;
  std::vector<Field> f;      // pencil eigenvalue fields
  std::vector<Field> fprime; // their single-variable derivatives
  bool has_pencil = false;
};

Prepared prepare(const ProblemSpec& p, Backend backend, bool check_pencil_distinct = true) {
  p.validate(check_pencil_distinct);
  Prepared prep;
  prep.frame = backend == Backend::FiniteDifference ? sampled_frame(p.frame, p.grid) : p.frame;
  prep.beta = rotation_coefficients(prep.frame);
  apply_beta_perturbations(prep.beta, p.beta_perturbations);

  auto adapt = [&](std::vector<NonlocalEntry> entries) {
    if (backend == Backend::FiniteDifference) {
      for (auto& e : entries)
        for (auto& h : e.H) h = h.sampled(p.grid, std::nullopt);
    }
    return entries;
  };
  prep.nl2 = adapt(p.nl2.expanded(prep.frame));
  if (p.nl1) prep.nl1 = adapt(p.nl1->expanded(prep.frame));

  if (p.pencil) {
    prep.has_pencil = true;
    const Field& proto = prep.frame.H[0];
    for (int i = 0; i < p.frame.dim; ++i) {
      prep.f.push_back(pencil_field(*p.pencil, i, proto, p.grid));
      prep.fprime.push_back(pencil_derivative_field(*p.pencil, i, proto, p.grid));
    }
  }
  return prep;
}

Complex sign(const std::vector<int>& eps, int i) {
  return Complex(eps[static_cast<size_t>(i)], 0.0);
}

std::vector<TaggedField> fields_for_tag(const ProblemSpec& p, const Prepared& prep,
                                        EquationTag tag) {
  const int n = p.frame.dim;
  const auto& eps2 = p.frame.eps2;
  std::vector<TaggedField> out;

  auto transport_equations = [&](const std::vector<NonlocalEntry>& nl) {
    for (size_t a = 0; a < nl.size(); ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          Field res = nl[a].H[static_cast<size_t>(j)].partial(i) -
                      prep.beta.at(i, j) * nl[a].H[static_cast<size_t>(i)];
          out.push_back({{static_cast<int>(a), i, j}, std::move(res)});
        }
  };

  switch (tag) {
    case EquationTag::LamX0:
      transport_equations(prep.nl2);
      break;
    case EquationTag::LamX1:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            if (i == j || i == k || j == k) continue;
            Field res = prep.beta.at(i, j).partial(k) -
                        prep.beta.at(i, k) * prep.beta.at(k, j);
            out.push_back({{i, j, k}, std::move(res)});
          }
      break;
    case EquationTag::LamX2:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Field res = sign(eps2, i) * prep.beta.at(i, j).partial(i) +
                      sign(eps2, j) * prep.beta.at(j, i).partial(j);
          for (int s = 0; s < n; ++s) {
            if (s == i || s == j) continue;
            res = res + sign(eps2, s) * (prep.beta.at(s, i) * prep.beta.at(s, j));
          }
          for (const auto& e : prep.nl2)
            res = res + Complex(e.eps, 0.0) *
                            (e.H[static_cast<size_t>(i)] * e.H[static_cast<size_t>(j)]);
          out.push_back({{i, j}, std::move(res)});
        }
      break;
    case EquationTag::Lam3:
      if (!prep.has_pencil)
        throw MissingPencil("lam3 requires a pencil section");
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const Complex half(0.5, 0.0);
          Field res =
              sign(eps2, i) * (prep.f[static_cast<size_t>(i)] * prep.beta.at(i, j).partial(i)) +
              half * sign(eps2, i) * (prep.fprime[static_cast<size_t>(i)] * prep.beta.at(i, j)) +
              sign(eps2, j) * (prep.f[static_cast<size_t>(j)] * prep.beta.at(j, i).partial(j)) +
              half * sign(eps2, j) * (prep.fprime[static_cast<size_t>(j)] * prep.beta.at(j, i));
          for (int s = 0; s < n; ++s) {
            if (s == i || s == j) continue;
            res = res + sign(eps2, s) * (prep.f[static_cast<size_t>(s)] *
                                         (prep.beta.at(s, i) * prep.beta.at(s, j)));
          }
          for (const auto& e : prep.nl1)
            res = res + Complex(e.eps, 0.0) *
                            (e.H[static_cast<size_t>(i)] * e.H[static_cast<size_t>(j)]);
          out.push_back({{i, j}, std::move(res)});
        }
      break;
    case EquationTag::Lam00:
      if (!prep.has_pencil)
        throw MissingPencil("lam00 requires a pencil section");
      transport_equations(prep.nl1);
      break;
    case EquationTag::Resolved: {
      if (!prep.has_pencil)
        throw MissingPencil("the resolved form requires a pencil section");
      // First-order form of the pair (lamx2, lam3), obtained by
      // eliminating d(beta_ji)/du^j and solving for d(beta_ij)/du^i:
      // all right-hand terms carry the common factor 1/(f^j - f^i).
      const Complex half(0.5, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const Field denom = prep.f[static_cast<size_t>(j)] - prep.f[static_cast<size_t>(i)];
          Field numer =
              half * (prep.fprime[static_cast<size_t>(i)] * prep.beta.at(i, j)) +
              half * (sign(eps2, i) * sign(eps2, j)) *
                  (prep.fprime[static_cast<size_t>(j)] * prep.beta.at(j, i));
          for (int s = 0; s < n; ++s) {
            if (s == i || s == j) continue;
            numer = numer - sign(eps2, i) * sign(eps2, s) *
                                ((prep.f[static_cast<size_t>(j)] - prep.f[static_cast<size_t>(s)]) *
                                 (prep.beta.at(s, i) * prep.beta.at(s, j)));
          }
          for (const auto& e : prep.nl1)
            numer = numer + sign(eps2, i) * Complex(e.eps, 0.0) *
                                (e.H[static_cast<size_t>(i)] * e.H[static_cast<size_t>(j)]);
          for (const auto& e : prep.nl2)
            numer = numer - sign(eps2, i) * Complex(e.eps, 0.0) *
                                (prep.f[static_cast<size_t>(j)] *
                                 (e.H[static_cast<size_t>(i)] * e.H[static_cast<size_t>(j)]));
          Field res = prep.beta.at(i, j).partial(i) - numer / denom;
          out.push_back({{i, j}, std::move(res)});
        }
      break;
    }
  }
  return out;
}

struct Worst {
  double value = 0.0;
  std::size_t node = 0;
  bool any = false;

  void consider(const kernels::Extreme& m) {
    if (!any || m.value > value || (m.value == value && m.index < node)) {
      value = m.value;
      node = m.index;
      any = true;
    }
  }
};

ResidualEntry reduce_tag(const ProblemSpec& p, const std::vector<TaggedField>& fields,
                         EquationTag tag, Backend backend) {
  Worst worst;
  for (const auto& tf : fields) {
    const auto vals = sample_values(tf.residual, p.grid, std::nullopt);
    worst.consider(kernels::max_abs(vals));
  }
  ResidualEntry entry;
  entry.tag = tag;
  entry.max_abs = worst.any ? worst.value : 0.0;
  entry.at = p.grid.node(worst.any ? worst.node : 0);
  entry.grid_spacing = p.grid.max_spacing();
  entry.backend = backend;
  return entry;
}

} // namespace

std::vector<TaggedField> residual_fields(const ProblemSpec& p, Backend backend,
                                         EquationTag tag) {
  const Prepared prep = prepare(p, backend);
  return fields_for_tag(p, prep, tag);
}

ResidualReport system_residuals(const ProblemSpec& p, Backend backend) {
  const auto tags = applicable_tags(p);
  return system_residuals(p, backend, tags);
}

ResidualReport system_residuals(const ProblemSpec& p, Backend backend,
                                std::span<const EquationTag> tags) {
  const Prepared prep = prepare(p, backend);
  ResidualReport report;
  for (const EquationTag tag : tags) {
    if (tag == EquationTag::Resolved)
      throw ConfigError("the resolved form has its own entry point");
    report.entries.push_back(reduce_tag(p, fields_for_tag(p, prep, tag), tag, backend));
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const ResidualEntry& a, const ResidualEntry& b) { return a.tag < b.tag; });
  return report;
}

ResidualReport resolved_beta_residuals(const ProblemSpec& p, Backend backend) {
  if (!p.pencil) throw MissingPencil("the resolved form requires a pencil section");
  // The eigenvalue gap guards the division; collisions are reported as
  // ZeroEigenvalueGap rather than as a generic pencil validation error.
  {
    const int n = p.frame.dim;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Field gap = Field::closed(p.pencil->f[static_cast<size_t>(i)] -
                                        p.pencil->f[static_cast<size_t>(j)]);
        const auto m = min_abs(gap, p.grid, std::nullopt);
        if (m.value <= kDegeneracyMargin)
          throw ZeroEigenvalueGap("eigenvalue gap |f" + std::to_string(j + 1) + " - f" +
                                  std::to_string(i + 1) + "| vanishes at node (" +
                                  format_coords(p.grid.node(m.node)) + ")");
      }
  }
  const Prepared prep = prepare(p, backend, /*check_pencil_distinct=*/false);
  ResidualReport report;
  report.entries.push_back(reduce_tag(
      p, fields_for_tag(p, prep, EquationTag::Resolved), EquationTag::Resolved, backend));
  return report;
}

} // namespace hydrolax
