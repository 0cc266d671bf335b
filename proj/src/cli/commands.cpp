#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "chiral/cli.hpp"
#include "chiral/eigensolver.hpp"
#include "chiral/lattice.hpp"
#include "chiral/meanfield.hpp"
#include "chiral/observables.hpp"
#include "chiral/witness.hpp"

namespace chiral::cli {

namespace {

std::string status_text(std::string msg) {
  std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n' || c == '"'; }, ';');
  return msg;
}

template <class T>
std::string join(const std::vector<T>& items, char sep, std::function<std::string(const T&)> fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += fmt(items[i]);
  }
  return out;
}

std::string join_sites(const std::vector<int>& sites) {
  return join<int>(sites, '-', [](const int& s) { return std::to_string(s); });
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad integer list: " + text);
    }
    if (used != item.size()) throw std::invalid_argument("bad integer list: " + text);
    out.push_back(v);
  }
  return out;
}

ManifoldOptions manifold_options(const RunConfig& c) {
  ManifoldOptions mo;
  mo.k_per_sector = c.k;
  mo.solver.k = c.k;
  mo.solver.tol = c.tol;
  mo.solver.seed = c.seed;
  return mo;
}

// One lambda point: its CSV lines (without status) or an error.
struct GridRow {
  std::vector<std::string> lines;
  std::string status = "ok";
  bool ok = true;
};

// Evaluates `body` on every grid point, up to `workers` at once; results stay
// in grid order.
std::vector<GridRow> map_grid(const std::vector<double>& grid, int workers,
                              const std::function<GridRow(double, std::size_t)>& body) {
  std::vector<GridRow> rows(grid.size());
  const auto n = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1) if (workers > 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      rows[idx] = body(grid[idx], idx);
    } catch (const std::exception& e) {
      GridRow failed;
      failed.ok = false;
      failed.status = status_text(e.what());
      rows[static_cast<std::size_t>(i)] = std::move(failed);
    }
  }
  return rows;
}

CommandOutput assemble_output(const std::string& header, const std::vector<double>& grid,
                              const std::vector<GridRow>& rows, int empty_cells) {
  CommandOutput out;
  out.csv = header + '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) {
      out.ok = false;
      out.csv += format_number(grid[i]) + std::string(static_cast<std::size_t>(empty_cells), ',') +
                 ',' + rows[i].status + '\n';
      continue;
    }
    for (const auto& line : rows[i].lines) out.csv += line + ',' + rows[i].status + '\n';
  }
  return out;
}

std::string converged_status(const GroundManifold& gm) {
  return gm.converged ? "ok" : "not-converged";
}

}  // namespace

CommandOutput cmd_spectrum(const RunConfig& config) {
  const auto grid = lambda_grid(config);
  const LatticeSpec spec = parse_geometry(config.geometry);
  const int n = spec.n_sites();
  auto rows = map_grid(grid, config.workers, [&](double lambda, std::size_t) {
    const auto gm = ground_manifold(spec, lambda, manifold_options(config));
    const auto levels = spin_resolved_manifold(gm);
    std::vector<double> spins, sz;
    for (const auto& lv : levels) {
      spins.push_back(lv.spin.s);
      const double z = sector_sz(n, lv.n_up);
      sz.push_back(z);
      if (gm.mirror_multiplicity(lv.n_up) == 2) sz.push_back(-z);
    }
    std::sort(spins.begin(), spins.end());
    spins.erase(std::unique(spins.begin(), spins.end()), spins.end());
    std::sort(sz.begin(), sz.end());
    std::string momenta;
    if (spec.is_torus()) {
      momenta = join<Momentum>(momentum_numbers(gm, spec), ';', [](const Momentum& m) {
        return format_number(m.k_row) + ':' + format_number(m.k_col);
      });
    }
    const auto num = [](const double& v) { return format_number(v); };
    GridRow row;
    row.lines.push_back(format_number(lambda) + ',' + format_number(gm.e0) + ',' +
                        format_number(gm.e0 / n) + ',' + std::to_string(gm.degeneracy) + ',' +
                        (std::isnan(gm.gap) ? std::string() : format_number(gm.gap)) + ',' +
                        join<double>(spins, ';', num) + ',' + join<double>(sz, ';', num) + ',' +
                        momenta);
    row.status = converged_status(gm);
    row.ok = gm.converged;
    return row;
  });
  return assemble_output("lambda,e0,energy_per_site,degeneracy,gap,S,Sz_list,momentum_list,status",
                         grid, rows, 7);
}

CommandOutput cmd_sweep(const RunConfig& config) {
  const auto grid = lambda_grid(config);
  const LatticeSpec spec = parse_geometry(config.geometry);
  std::vector<double> chirality(grid.size(), std::nan(""));
  std::vector<double> e0(grid.size(), std::nan(""));
  auto rows = map_grid(grid, config.workers, [&](double lambda, std::size_t i) {
    const auto gm = ground_manifold(spec, lambda, manifold_options(config));
    chirality[i] = mean_chirality(gm, spec);
    e0[i] = gm.e0 / spec.n_sites();
    GridRow row;
    row.status = converged_status(gm);
    row.ok = gm.converged;
    return row;
  });
  std::string jump;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (rows[i].ok && chirality[i] > 0.05) {
      jump = format_number(grid[i]);
      break;
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (rows[i].ok) {
      rows[i].lines.push_back(format_number(grid[i]) + ',' + format_number(chirality[i]) + ',' +
                              format_number(e0[i]) + ',' + jump);
    }
  }
  return assemble_output("lambda,mean_chirality,e0_per_site,jump_lambda,status", grid, rows, 3);
}

CommandOutput cmd_correlations(const RunConfig& config) {
  const auto grid = lambda_grid(config);
  const LatticeSpec spec = parse_geometry(config.geometry);
  const auto colon = config.reference.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("reference must look like site:I, bond:I,J or plaquette:I,J,K");
  }
  const std::string kind = config.reference.substr(0, colon);
  const std::vector<int> ref = parse_ints(config.reference.substr(colon + 1));
  const int n = spec.n_sites();
  for (int s : ref) {
    if (s < 0 || s >= n) throw std::invalid_argument("reference site out of range");
  }

  std::function<std::vector<std::string>(const SectorState&, const std::string&)> emit;
  if (kind == "site" && ref.size() == 1) {
    emit = [&](const SectorState& st, const std::string& lam) {
      std::vector<std::string> lines;
      for (int j = 0; j < n; ++j) {
        lines.push_back(lam + ",spin," + std::to_string(j) + ',' +
                        format_number(object_distance(spec, ref, {j})) + ',' +
                        format_number(spin_correlator(st, ref[0], j)));
      }
      return lines;
    };
  } else if (kind == "bond" && ref.size() == 2) {
    const int b = spec.find_bond(ref[0], ref[1]);
    if (b < 0) throw std::invalid_argument("reference bond is not part of the lattice");
    const Bond rb = spec.bonds()[static_cast<std::size_t>(b)];
    emit = [&, rb](const SectorState& st, const std::string& lam) {
      std::vector<std::string> lines;
      for (const auto& bond : spec.bonds()) {
        const auto d = dimer_correlator(st, rb, bond);
        lines.push_back(lam + ",dimer," + join_sites({bond.i, bond.j}) + ',' +
                        format_number(object_distance(spec, {rb.i, rb.j}, {bond.i, bond.j})) +
                        ',' + (d ? format_number(*d) : std::string()));
      }
      return lines;
    };
  } else if (kind == "plaquette" && ref.size() == 3) {
    const int p = spec.find_plaquette(ref[0], ref[1], ref[2]);
    if (p < 0) throw std::invalid_argument("reference plaquette is not part of the lattice");
    const Plaquette rp = spec.plaquettes()[static_cast<std::size_t>(p)];
    emit = [&, rp](const SectorState& st, const std::string& lam) {
      std::vector<std::string> lines;
      const std::vector<int> rs(rp.sites.begin(), rp.sites.end());
      for (const auto& pl : spec.plaquettes()) {
        const std::vector<int> ps(pl.sites.begin(), pl.sites.end());
        lines.push_back(lam + ",chiral," + join_sites(ps) + ',' +
                        format_number(object_distance(spec, rs, ps)) + ',' +
                        format_number(chiral_correlator(st, rp, pl)));
      }
      return lines;
    };
  } else {
    throw std::invalid_argument("reference must look like site:I, bond:I,J or plaquette:I,J,K");
  }

  auto rows = map_grid(grid, config.workers, [&](double lambda, std::size_t) {
    const auto gm = ground_manifold(spec, lambda, manifold_options(config));
    const SectorState st = representative_state(gm, spec);
    GridRow row;
    row.lines = emit(st, format_number(lambda));
    row.status = converged_status(gm);
    row.ok = gm.converged;
    return row;
  });
  return assemble_output("lambda,kind,target,distance,value,status", grid, rows, 4);
}

namespace {

ThreeSpinDensity read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open state file " + path);
  std::vector<cplx> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    std::string extra;
    if (!(ls >> re >> im) || (ls >> extra)) {
      throw std::invalid_argument("malformed state file line " + std::to_string(lineno) +
                                  ": expected `re im`");
    }
    values.emplace_back(re, im);
  }
  if (values.size() == 8) {
    Vector8cd psi;
    for (int i = 0; i < 8; ++i) psi[i] = values[static_cast<std::size_t>(i)];
    return ThreeSpinDensity::pure(psi);
  }
  if (values.size() == 64) {
    Matrix8cd rho;
    for (int r = 0; r < 8; ++r) {
      for (int c = 0; c < 8; ++c) rho(r, c) = values[static_cast<std::size_t>(8 * r + c)];
    }
    return ThreeSpinDensity(rho, 1e-8);
  }
  throw std::invalid_argument("malformed state file: expected 8 or 64 amplitudes, found " +
                              std::to_string(values.size()));
}

std::string witness_cells(const WitnessResult& w) {
  return format_number(w.chi_raw) + ',' + format_number(w.chi_max) + ',' + format_number(w.e_x) +
         ',' + std::string(to_string(w.entanglement_class));
}

}  // namespace

CommandOutput cmd_witness(const RunConfig& config) {
  validate(config);
  const std::string header = "lambda,triple,chi_raw,chi_max,e_x,class,status";
  WitnessOptions wo;
  wo.restarts = config.restarts;
  wo.seed = config.seed;
  if (!config.state_file.empty()) {
    const auto rho = read_state_file(config.state_file);
    CommandOutput out;
    out.csv = header + "\n,," + witness_cells(witness_ex(rho, wo)) + ",ok\n";
    return out;
  }
  const auto grid = lambda_grid(config);
  const LatticeSpec spec = parse_geometry(config.geometry);
  std::vector<std::array<int, 3>> triples;
  if (config.triple.empty()) {
    for (const auto& p : spec.plaquettes()) triples.push_back(p.sites);
  } else {
    const auto t = parse_ints(config.triple);
    if (t.size() != 3) throw std::invalid_argument("triple must be I,J,K");
    triples.push_back({t[0], t[1], t[2]});
  }
  auto rows = map_grid(grid, config.workers, [&](double lambda, std::size_t) {
    const auto gm = ground_manifold(spec, lambda, manifold_options(config));
    const SectorState st = representative_state(gm, spec);
    GridRow row;
    for (const auto& t : triples) {
      const auto rho = reduced_density(st, t[0], t[1], t[2]);
      row.lines.push_back(format_number(lambda) + ',' + join_sites({t[0], t[1], t[2]}) + ',' +
                          witness_cells(witness_ex(rho, wo)));
    }
    row.status = converged_status(gm);
    row.ok = gm.converged;
    return row;
  });
  return assemble_output(header, grid, rows, 5);
}

CommandOutput cmd_meanfield(const RunConfig& config) {
  const auto grid = lambda_grid(config);
  const LatticeSpec spec = parse_geometry(config.geometry);
  if (spec.geometry().kind != GeometryKind::LadderA || !spec.geometry().periodic) {
    throw std::invalid_argument("meanfield needs a periodic type-A ladder (ladder-a:N)");
  }
  const int ladder_length = spec.n_sites() / 2;
  for (int size : config.ed_sizes) {
    if (size < 6 || size % 2 != 0) {
      throw std::invalid_argument("exact comparison sizes must be even and at least 6; got " +
                                  std::to_string(size));
    }
  }
  std::vector<LatticeSpec> ed_specs;
  for (int size : config.ed_sizes) ed_specs.push_back(build_ladder_a(size, true));

  const double lambda_c = transition_point();
  std::string header = "lambda,alpha,mf_energy_per_site,lambda_c";
  for (int size : config.ed_sizes) header += ",ed_energy_per_site_N" + std::to_string(size);
  header += ",status";

  auto rows = map_grid(grid, config.workers, [&](double lambda, std::size_t) {
    const auto sol = solve_self_consistent(lambda, ladder_length);
    std::string line = format_number(lambda) + ',' + format_number(sol.alpha) + ',' +
                       format_number(sol.energy_per_site) + ',' + format_number(lambda_c);
    GridRow row;
    for (const auto& es : ed_specs) {
      const auto gm = ground_manifold(es, lambda, manifold_options(config));
      line += ',' + format_number(gm.e0 / es.n_sites());
      if (!gm.converged) {
        row.ok = false;
        row.status = "not-converged";
      }
    }
    row.lines.push_back(line);
    return row;
  });
  return assemble_output(header, grid, rows, 3 + static_cast<int>(config.ed_sizes.size()));
}

CommandOutput run(const RunConfig& config) {
  if (config.command == "spectrum") return cmd_spectrum(config);
  if (config.command == "sweep") return cmd_sweep(config);
  if (config.command == "correlations") return cmd_correlations(config);
  if (config.command == "witness") return cmd_witness(config);
  if (config.command == "meanfield") return cmd_meanfield(config);
  throw std::invalid_argument("unknown command: " + config.command);
}

}  // namespace chiral::cli
