#include "spinbath_cli/run.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include <spinbath/env_info.hpp>
#include <spinbath/lee_yang.hpp>
#include <spinbath/version.hpp>

#include "spinbath_cli/parallel.hpp"

namespace spinbath::cli {

namespace {

using Rows = std::vector<Row>;

Rows flatten(std::vector<Rows> parts) {
  Rows out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> betas_of(const RunConfig& cfg) {
  return cfg.grid.beta_list.empty() ? std::vector<double>{cfg.bath.beta} : cfg.grid.beta_list;
}

Rows decoherence_rows(const RunConfig& cfg, int threads) {
  const auto times = cfg.time_grid().points();
  return parallel_map(times.size(), threads, [&](std::size_t i) {
    const double t = times[i];
    const Complex g = decoherence_function(cfg.bath, cfg.system.alpha, t);
    return Row{t, g.real(), g.imag(), std::abs(g),
               decoherence_rate(cfg.bath, cfg.system.alpha, t)};
  });
}

RunResult trace_distance_result(const RunConfig& cfg) {
  const auto series = blp_witness_series({QubitDensity::plus(), QubitDensity::minus()}, cfg.bath,
                                         cfg.system.alpha, cfg.time_grid());
  RunResult r;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    r.table.rows.push_back(Row{series.times[i], series.values[i], series.rates[i]});
  }
  r.summary["blp_measure"] = series.blp_measure;
  return r;
}

Rows cpf_rows(const RunConfig& cfg, int threads) {
  const auto ts = cfg.time_grid().points();
  const auto ss = cfg.delay_grid().points();
  const bool with_oracle = cfg.bath.n <= kMaxOracleSpins;
  const QubitDensity initial = QubitDensity::pure(cfg.system.a, cfg.system.b);
  return parallel_map(ts.size() * ss.size(), threads, [&](std::size_t i) {
    const double t = ts[i / ss.size()];
    const double s = ss[i % ss.size()];
    const CPFResult f = cpf_formula(cfg.bath, cfg.system.alpha, t, s);
    Cell oracle;
    if (with_oracle) {
      try {
        oracle = *cpf_oracle(initial, cfg.bath, cfg.system.alpha, t, s, cfg.cpf_outcome)
                      .value_oracle;
      } catch (const UndefinedConditionalError&) {
        // conditioning outcome never occurs at this (t, s): leave the cell empty
      }
    }
    return Row{t, s, f.value_formula, oracle};
  });
}

Rows pip_rows(const RunConfig& cfg, int threads) {
  const auto betas = betas_of(cfg);
  const auto times = cfg.pip_times.empty()
                         ? std::vector<double>{0.5 * recoherence_period(cfg.system.alpha)}
                         : cfg.pip_times;
  auto parts = parallel_map(betas.size() * times.size(), threads, [&](std::size_t i) {
    BathParams bath = cfg.bath;
    bath.beta = betas[i / times.size()];
    const double t = times[i % times.size()];
    const PipCurve curve = pip_curve(cfg.system, bath, t);
    Rows rows;
    for (std::size_t k = 0; k < curve.fractions.size(); ++k) {
      rows.push_back(Row{bath.beta, t, curve.fractions[k], curve.mutual_information[k],
                         curve.system_entropy});
    }
    return rows;
  });
  return flatten(std::move(parts));
}

Rows sbs_rows(const RunConfig& cfg, int threads) {
  const auto times = cfg.time_grid().points();
  const int size = static_cast<int>(std::lround(cfg.sbs_fraction * cfg.bath.n));
  const FragmentSpec frag = FragmentSpec::prefix(size, cfg.bath.n);
  return parallel_map(times.size(), threads, [&](std::size_t i) {
    const double t = times[i];
    const JointBlockState state = cfg.bath.J == 0.0
                                      ? joint_state_noninteracting(cfg.system, cfg.bath, frag, t)
                                      : joint_state_general(cfg.system, cfg.bath, frag, t);
    const SBSReport rep = sbs_diagnostics(state, cfg.system);
    return Row{t, rep.coherence_trace_norm, rep.conditional_fidelity, rep.sbs};
  });
}

Rows purity_rows(const RunConfig& cfg, int threads) {
  const auto betas = betas_of(cfg);
  return parallel_map(betas.size(), threads, [&](std::size_t i) {
    BathParams bath = cfg.bath;
    bath.beta = betas[i];
    return Row{bath.beta, bath_purity(bath)};
  });
}

RunResult lee_yang_result(const RunConfig& cfg) {
  RunResult r;
  const auto zeros = lee_yang_zeros(cfg.bath);
  const bool real_times = !critical_times(cfg.bath, cfg.system.alpha).empty();
  for (const auto& z : zeros) {
    Cell time;
    if (real_times) time = z.angle / (4.0 * cfg.system.alpha);
    r.table.rows.push_back(Row{static_cast<std::int64_t>(z.index), z.value.real(),
                               z.value.imag(), std::abs(z.value), z.angle,
                               static_cast<std::int64_t>(z.multiplicity), time});
  }
  return r;
}

template <typename T>
std::vector<T> or_base(const std::vector<T>& list, T base) {
  return list.empty() ? std::vector<T>{base} : list;
}

}  // namespace

int resolve_threads(std::optional<int> flag, const RunConfig& cfg) {
  if (const char* env = std::getenv(kThreadsEnv); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw ConfigError(std::string(kThreadsEnv) + ": expected a positive integer, got '" + env +
                        "'");
    }
    return static_cast<int>(v);
  }
  if (flag) {
    if (*flag < 1) throw ConfigError("--threads: must be >= 1");
    return *flag;
  }
  if (cfg.threads) return *cfg.threads;
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

std::vector<std::string> columns_for(Analysis analysis) {
  switch (analysis) {
    case Analysis::decoherence:
      return {"t", "re_gamma", "im_gamma", "abs_gamma", "rate"};
    case Analysis::lee_yang:
      return {"index", "re_z", "im_z", "abs_z", "angle", "multiplicity", "critical_time"};
    case Analysis::trace_distance:
      return {"t", "D", "sigma"};
    case Analysis::cpf:
      return {"t", "s", "cpf_formula", "cpf_oracle"};
    case Analysis::pip:
      return {"beta", "t", "f", "I_bits", "S_system_bits"};
    case Analysis::sbs:
      return {"t", "coherence_norm", "fidelity", "sbs_flag"};
    case Analysis::purity:
      return {"beta", "purity"};
    case Analysis::sweep:
      break;
  }
  return {};
}

RunResult run(Analysis analysis, const RunConfig& cfg, int threads) {
  cfg.bath.validate();
  cfg.system.validate();
  RunResult r;
  switch (analysis) {
    case Analysis::decoherence:
      r.table.rows = decoherence_rows(cfg, threads);
      break;
    case Analysis::lee_yang:
      r = lee_yang_result(cfg);
      break;
    case Analysis::trace_distance:
      r = trace_distance_result(cfg);
      break;
    case Analysis::cpf:
      r.table.rows = cpf_rows(cfg, threads);
      break;
    case Analysis::pip:
      r.table.rows = pip_rows(cfg, threads);
      break;
    case Analysis::sbs:
      r.table.rows = sbs_rows(cfg, threads);
      break;
    case Analysis::purity:
      r.table.rows = purity_rows(cfg, threads);
      break;
    case Analysis::sweep:
      return sweep(cfg, threads);
  }
  r.table.columns = columns_for(analysis);
  return r;
}

RunResult sweep(const RunConfig& cfg, int threads) {
  const auto& sw = cfg.sweep;
  const auto ns = or_base(sw.n, cfg.bath.n);
  const auto js = or_base(sw.J, cfg.bath.J);
  const auto hs = or_base(sw.h, cfg.bath.h);
  const auto betas = or_base(sw.beta, cfg.bath.beta);
  const auto alphas = or_base(sw.alpha, cfg.system.alpha);

  std::size_t cells = 1;
  for (std::size_t len : {ns.size(), js.size(), hs.size(), betas.size(), alphas.size()}) {
    if (cells > sw.cap / len) {
      throw ConfigError("sweep.cap: sweep has more than " + std::to_string(sw.cap) + " cells");
    }
    cells *= len;
  }

  auto parts = parallel_map(cells, threads, [&](std::size_t cell) {
    std::size_t rest = cell;
    const auto pick = [&rest](std::size_t len) {
      const std::size_t i = rest % len;
      rest /= len;
      return i;
    };
    // alpha varies fastest, n slowest
    const std::size_t ia = pick(alphas.size());
    const std::size_t ib = pick(betas.size());
    const std::size_t ih = pick(hs.size());
    const std::size_t ij = pick(js.size());
    const std::size_t in = pick(ns.size());

    RunConfig c = cfg;
    c.bath.n = ns[in];
    c.bath.J = js[ij];
    c.bath.h = hs[ih];
    c.bath.beta = betas[ib];
    c.system.alpha = alphas[ia];
    c.grid.beta_list.clear();
    const RunResult inner = run(sw.analysis, c, 1);

    Rows rows;
    for (const auto& r : inner.table.rows) {
      Row row{static_cast<std::int64_t>(c.bath.n), c.bath.J, c.bath.h, c.bath.beta,
              c.system.alpha};
      row.insert(row.end(), r.begin(), r.end());
      rows.push_back(std::move(row));
    }
    return std::make_pair(std::move(rows), inner.summary);
  });

  RunResult r;
  r.table.columns = {"n", "J", "h", "beta", "alpha"};
  for (const auto& c : columns_for(sw.analysis)) r.table.columns.push_back(c);
  auto cell_summaries = nlohmann::ordered_json::array();
  for (auto& [rows, summary] : parts) {
    for (auto& row : rows) r.table.rows.push_back(std::move(row));
    cell_summaries.push_back(summary);
  }
  r.summary["cells"] = cells;
  if (sw.analysis == Analysis::trace_distance) r.summary["cell_summaries"] = cell_summaries;
  return r;
}

nlohmann::ordered_json metadata(Analysis analysis, const RunConfig& cfg, const RunResult& result) {
  nlohmann::ordered_json j;
  j["library"] = "spinbath";
  j["version"] = kVersion;
  j["subcommand"] = to_string(analysis);
  j["config"] = config_to_json(cfg);
  j["columns"] = result.table.columns;
  j["row_count"] = result.table.rows.size();
  j["summary"] = result.summary;
  j["warnings"] = cfg.warnings;
  return j;
}

std::string sidecar_path(const std::string& out_path) { return out_path + ".meta.json"; }

void write_outputs(Analysis analysis, const RunConfig& cfg, const RunResult& result,
                   std::ostream& fallback) {
  const auto write_primary = [&](std::ostream& out) {
    if (cfg.format == Format::csv) {
      write_csv(out, result.table);
    } else {
      out << table_to_json(result.table).dump(2) << '\n';
    }
  };

  if (cfg.out_path.empty()) {
    write_primary(fallback);
    fallback.flush();
    if (!fallback) throw IoError("failed writing to standard output");
    return;
  }

  {
    std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file '" + cfg.out_path + "'");
    write_primary(out);
    out.close();
    if (!out) throw IoError("failed writing output file '" + cfg.out_path + "'");
  }
  const std::string meta = sidecar_path(cfg.out_path);
  std::ofstream side(meta, std::ios::binary | std::ios::trunc);
  if (!side) throw IoError("cannot open metadata file '" + meta + "'");
  side << metadata(analysis, cfg, result).dump(2) << '\n';
  side.close();
  if (!side) throw IoError("failed writing metadata file '" + meta + "'");
}

}  // namespace spinbath::cli
