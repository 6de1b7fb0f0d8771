// seqnet: build open sequestration networks, compute their three steady
// states, certify bistability, and integrate the dynamics.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "seqnet/json_io.hpp"
#include "seqnet/sim.hpp"
#include "seqnet/witness.hpp"

namespace {

using namespace seqnet;

constexpr int kExitOk = 0;
constexpr int kExitAnalytic = 1;
constexpr int kExitUsage = 2;

int thread_cap(int requested) {
  int cap = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SEQNET_THREADS")) {
    const int limit = std::atoi(env);
    if (limit > 0) cap = std::min(cap, limit);
  }
  return std::max(1, cap);
}

std::vector<Rational> parse_rational_list(const std::string& text, const char* what) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto q = parse_rational(item);
    if (!q) throw CLI::ValidationError(std::string(what) + ": cannot parse '" + item + "'");
    out.push_back(*q);
  }
  if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  return to_doubles(parse_rational_list(text, what));
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

FrontRates front_from(int n, const std::string& rates_csv, const std::string& rn2_text) {
  FrontRates front;
  front.r = parse_rational_list(rates_csv, "--rates");
  if (static_cast<int>(front.r.size()) != n)
    throw CLI::ValidationError("--rates: expected " + std::to_string(n) + " values");
  auto q = parse_rational(rn2_text);
  if (!q || *q <= 0) throw CLI::ValidationError("--rn2: need a positive rate");
  front.rn2 = *q;
  return front;
}

std::string human_witness(const WitnessResult& w) {
  std::ostringstream out;
  out.precision(6);
  out << "K~(" << w.params.m << "," << w.params.n << ") ";
  out << (w.bistable ? "bistable" : "not bistable") << " at eps = " << to_double(w.eps) << "\n";
  for (size_t i = 0; i < w.states.size(); ++i) {
    const SteadyState& st = w.states[i];
    out << "  [" << to_string(st.branch) << "] x = (";
    for (size_t j = 0; j < st.x.size(); ++j) out << (j ? ", " : "") << st.x[j];
    out << ")  detJ = " << st.det_jacobian << "  residual = " << st.residual_norm;
    if (i < w.reports.size()) out << "  " << to_string(w.reports[i].verdict);
    out << "\n";
  }
  if (!w.failure.empty()) out << "  failure: " << w.failure << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"open sequestration network bistability toolkit"};
  app.require_subcommand(1);

  int m = 0, n = 0;
  std::string rates_csv, rn2_text, state_csv, out_path, format = "text", network_path;
  std::string eps_text = "0.1", shrink_text = "0.1", mode = "canonical";
  std::uint64_t seed = 0;
  int rounds = 12, threads = 0, samples = 0;
  double t_max = 1e4, rtol = 1e-8, atol = 1e-10, radius = 1e-3;
  std::string m_values = "2", n_values = "3";

  auto add_mn = [&](CLI::App* cmd) {
    cmd->add_option("-m", m, "production factor")->required();
    cmd->add_option("-n", n, "number of species")->required();
  };

  CLI::App* gen = app.add_subcommand("gen", "print the fully open network");
  add_mn(gen);
  gen->add_option("--format", format, "text|json");
  gen->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* witness = app.add_subcommand("witness", "run the full bistability construction");
  add_mn(witness);
  witness->add_option("--rates", rates_csv, "r1..rn (comma separated, decimals or fractions)");
  witness->add_option("--rn2", rn2_text, "outflow rate of X2");
  witness->add_option("--eps", eps_text, "starting eps of the shrinking schedule");
  witness->add_option("--shrink", shrink_text, "eps shrink factor per round");
  witness->add_option("--rounds", rounds, "max eps rounds");
  witness->add_option("--seed", seed, "sample the region with this seed");
  witness->add_option("--mode", mode, "canonical|canonical-alt|sample|user");
  witness->add_option("--format", format, "text|json");
  witness->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* analyze = app.add_subcommand("analyze", "region check + classification for full rates");
  add_mn(analyze);
  analyze->add_option("--rates", rates_csv, "full 3n rate vector")->required();
  analyze->add_option("--state", state_csv, "optional state to refine and classify");
  analyze->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the mass-action dynamics");
  simulate->add_option("-m", m, "production factor");
  simulate->add_option("-n", n, "number of species");
  simulate->add_option("--network", network_path, "network file in the reaction grammar");
  simulate->add_option("--rates", rates_csv, "rate vector (one per reaction)")->required();
  simulate->add_option("--x0", state_csv, "initial state")->required();
  simulate->add_option("--t-max", t_max, "integration horizon");
  simulate->add_option("--rtol", rtol, "relative tolerance");
  simulate->add_option("--atol", atol, "absolute tolerance");
  simulate->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* region = app.add_subcommand("region-check", "evaluate the region inequalities");
  add_mn(region);
  region->add_option("--rates", rates_csv, "r1..rn")->required();
  region->add_option("--rn2", rn2_text, "outflow rate of X2")->required();
  std::string theorem = "bistability";
  region->add_option("--theorem", theorem, "mss|bistability|bistability-alt");
  region->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run the pipeline over a parameter grid");
  sweep_cmd->add_option("--m-values", m_values, "comma separated m values");
  sweep_cmd->add_option("--n-values", n_values, "comma separated n values");
  sweep_cmd->add_option("--mode", mode, "canonical|canonical-alt|sample");
  sweep_cmd->add_option("--seed", seed, "base seed for sample mode");
  sweep_cmd->add_option("--eps", eps_text, "starting eps");
  sweep_cmd->add_option("--rounds", rounds, "max eps rounds");
  sweep_cmd->add_option("--threads", threads, "worker pool size (0 = auto)");
  sweep_cmd->add_option("--out", out_path, "output path (default stdout)");
  (void)samples;
  (void)radius;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      ReactionNetwork net = fully_open_extension(build_sequestration(m, n));
      if (format == "json")
        emit(network_json(net).dump(2), out_path);
      else
        emit(format_network(net), out_path);
      return kExitOk;
    }

    if (witness->parsed()) {
      ModelParams params{m, n};
      WitnessOptions opts;
      auto eps0 = parse_rational(eps_text);
      auto shrink = parse_rational(shrink_text);
      if (!eps0 || *eps0 <= 0) throw CLI::ValidationError("--eps: need a positive rational");
      if (!shrink || *shrink <= 0 || *shrink >= 1)
        throw CLI::ValidationError("--shrink: need a rational in (0,1)");
      opts.eps0 = *eps0;
      opts.shrink = *shrink;
      opts.max_rounds = rounds;
      RateSource source = CanonicalSource{RateChoice::Bistability};
      const bool has_rates = !rates_csv.empty();
      if (has_rates || mode == "user") {
        if (!has_rates || rn2_text.empty())
          throw CLI::ValidationError("user rates need --rates and --rn2");
        source = UserSource{front_from(n, rates_csv, rn2_text)};
      } else if (mode == "sample") {
        source = SampledSource{seed};
      } else if (mode == "canonical-alt") {
        source = CanonicalSource{RateChoice::BistabilityAlt};
      } else if (mode != "canonical") {
        throw CLI::ValidationError("--mode: unknown mode " + mode);
      }
      WitnessResult result = find_witness(params, source, opts);
      if (format == "json")
        emit(witness_json(result).dump(2), out_path);
      else
        emit(human_witness(result), out_path);
      return result.bistable ? kExitOk : kExitAnalytic;
    }

    if (analyze->parsed()) {
      ModelParams params{m, n};
      params.require_family();
      std::vector<Rational> rates = parse_rational_list(rates_csv, "--rates");
      if (static_cast<int>(rates.size()) != 3 * n)
        throw CLI::ValidationError("--rates: expected " + std::to_string(3 * n) + " values");
      FrontRates front;
      front.r.assign(rates.begin(), rates.begin() + n);
      front.rn2 = rates[n + 1];

      nlohmann::json doc;
      doc["schema"] = kSchema;
      RegionCheck standard = check_bistability(params, front, false);
      RegionCheck alt = check_bistability(params, front, true);
      doc["region"] = region_json(standard.all_satisfied ? standard : alt);

      // When the vector has the constructed shape (uniform eps slots and the
      // derived inflows), rebuild the three branches at its eps.
      const std::vector<int> slots = eps_slots(n);
      bool uniform = true;
      for (int j : slots) uniform = uniform && rates[j - 1] == rates[slots.front() - 1];
      bool conserved = false;
      if (uniform) {
        RateVector derived = assemble_rates(params, front, rates[slots.front() - 1]);
        conserved = derived.values() == rates;
      }
      doc["states"] = nlohmann::json::array();
      int analytic_failures = 0;
      RateVector rv(n, rates, conserved ? RateMode::ConservationSubstituted : RateMode::Free);
      if (conserved) {
        const Rational eps = rates[slots.front() - 1];
        for (Branch branch : {Branch::AllOnes, Branch::Delta, Branch::Boundary}) {
          ContinuationResult cont = continue_in_eps(params, front, branch, eps);
          if (!cont.ok) {
            ++analytic_failures;
            continue;
          }
          nlohmann::json entry = state_json(cont.state);
          entry["report"] = report_json(classify(params, rv, cont.state.x));
          doc["states"].push_back(std::move(entry));
        }
      }
      if (!state_csv.empty()) {
        std::vector<double> x0 = parse_double_list(state_csv, "--state");
        if (static_cast<int>(x0.size()) != n)
          throw CLI::ValidationError("--state: expected " + std::to_string(n) + " values");
        std::vector<double> rd = rv.as_doubles();
        auto system = [&](std::span<const double> x, std::vector<double>& f, Mat<double>* jac) {
          f = family_rhs<double>(params, rd, x);
          if (jac) *jac = family_jacobian<double>(params, std::span<const double>(rd), x);
        };
        NewtonResult nr = newton_refine(system, x0);
        if (nr.status != NewtonStatus::Converged) {
          ++analytic_failures;
          doc["user_state_error"] = to_string(nr.status);
        } else {
          SteadyState st;
          st.x = nr.x;
          st.residual_norm = nr.residual_norm;
          st.branch = Branch::Delta;
          nlohmann::json entry = state_json(st);
          entry.erase("branch");
          entry["report"] = report_json(classify(params, rv, nr.x));
          doc["user_state"] = std::move(entry);
        }
      }
      emit(doc.dump(2), out_path);
      return analytic_failures == 0 ? kExitOk : kExitAnalytic;
    }

    if (simulate->parsed()) {
      ReactionNetwork net = network_path.empty()
                                ? fully_open_extension(build_sequestration(m, n))
                                : [&] {
                                    std::ifstream in(network_path);
                                    if (!in) throw CLI::ValidationError("cannot read " + network_path);
                                    std::stringstream buf;
                                    buf << in.rdbuf();
                                    return parse_network(buf.str());
                                  }();
      std::vector<double> rates = parse_double_list(rates_csv, "--rates");
      std::vector<double> x0 = parse_double_list(state_csv, "--x0");
      IntegrateOptions opts;
      opts.t_max = t_max;
      opts.rtol = rtol;
      opts.atol = atol;
      Trajectory traj = integrate(net, rates, x0, opts);
      emit(trajectory_csv(traj), out_path);
      switch (traj.terminal.kind) {
        case TerminalKind::Converged:
          std::cerr << "converged to registered target " << traj.terminal.target_index << "\n";
          return kExitOk;
        case TerminalKind::MaxTime:
          std::cerr << "reached t_max\n";
          return kExitOk;
        case TerminalKind::LeftDomain:
          std::cerr << "integration failed: " << traj.terminal.diagnostic << "\n";
          return kExitAnalytic;
      }
      return kExitOk;
    }

    if (region->parsed()) {
      ModelParams params{m, n};
      FrontRates front = front_from(n, rates_csv, rn2_text);
      RegionCheck check;
      if (theorem == "mss")
        check = check_mss(params, front);
      else if (theorem == "bistability")
        check = check_bistability(params, front, false);
      else if (theorem == "bistability-alt")
        check = check_bistability(params, front, true);
      else
        throw CLI::ValidationError("--theorem: unknown theorem " + theorem);
      emit(region_json(check).dump(2), out_path);
      return check.all_satisfied ? kExitOk : kExitAnalytic;
    }

    if (sweep_cmd->parsed()) {
      std::vector<double> ms = parse_double_list(m_values, "--m-values");
      std::vector<double> ns = parse_double_list(n_values, "--n-values");
      WitnessOptions opts;
      auto eps0 = parse_rational(eps_text);
      if (!eps0 || *eps0 <= 0) throw CLI::ValidationError("--eps: need a positive rational");
      opts.eps0 = *eps0;
      opts.max_rounds = rounds;
      std::vector<SweepCell> cells;
      std::uint64_t cell_seed = seed;
      for (double mv : ms)
        for (double nv : ns) {
          SweepCell cell;
          cell.params = {static_cast<int>(mv), static_cast<int>(nv)};
          if (mode == "sample")
            cell.source = SampledSource{cell_seed++};
          else if (mode == "canonical-alt")
            cell.source = CanonicalSource{RateChoice::BistabilityAlt};
          else
            cell.source = CanonicalSource{RateChoice::Bistability};
          cells.push_back(std::move(cell));
        }
      auto summaries = sweep(cells, opts, thread_cap(threads));
      emit(sweep_json(summaries).dump(2), out_path);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalytic;
  }
  return kExitUsage;
}
