// Command-line front end: thin orchestration over the library.  Every
// behaviour reachable here is reachable through library calls with identical
// results; the tool only parses arguments, wires files, and formats output.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swashsim/actuation.hpp"
#include "swashsim/backstepping_control.hpp"
#include "swashsim/config.hpp"
#include "swashsim/core_math.hpp"
#include "swashsim/errors.hpp"
#include "swashsim/sim_engine.hpp"
#include "swashsim/sizing_analysis.hpp"
#include "swashsim/vehicle_model.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDiverged = 2;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

swash::PlantModel model_from_name(const std::string& name) {
  if (name == "full2d") return swash::PlantModel::full2d;
  if (name == "simplified2d") return swash::PlantModel::simplified2d;
  if (name == "full3d") return swash::PlantModel::full3d;
  throw swash::ConfigError(
      "--model expects full2d, simplified2d, or full3d, got '" + name + "'");
}

void print_scores(const swash::SimLog& log) {
  if (log.records.empty()) return;
  const swash::RmseResult r = swash::rmse_all(log);
  std::printf("RMSE_y = %.6f m\n", r.y);
  std::printf("RMSE_z = %.6f m\n", r.z);
  if (log.tracked_axes == 3) std::printf("RMSE_x = %.6f m\n", r.x);
  std::printf("RMSE_overall = %.6f m\n", r.overall);
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& model_override, bool seed_check) {
  swash::RunConfig cfg = swash::load_config(config_path);
  if (!model_override.empty()) cfg.model = model_from_name(model_override);

  const swash::SimConfig sim = swash::make_sim_config(cfg);
  const swash::ReferenceFn reference = swash::make_reference(cfg);

  std::filesystem::create_directories(out_dir);
  const std::string trace_path = join_path(out_dir, cfg.trace_name);
  const std::string summary_path = join_path(out_dir, cfg.summary_name);

  const swash::SimLog log =
      swash::try_run_closed_loop(sim, cfg.gains, reference);
  swash::write_trace_csv(log, trace_path);
  swash::write_summary_json(log, summary_path);
  print_scores(log);

  if (log.diverged) {
    std::fprintf(stderr, "simulation diverged: %s\n",
                 log.divergence_reason.c_str());
    return kExitDiverged;
  }

  if (seed_check) {
    const std::string check_path = trace_path + ".check";
    const swash::SimLog rerun =
        swash::try_run_closed_loop(sim, cfg.gains, reference);
    swash::write_trace_csv(rerun, check_path);
    const bool identical =
        read_file_bytes(trace_path) == read_file_bytes(check_path);
    std::filesystem::remove(check_path);
    std::printf("determinism check: %s\n",
                identical ? "byte-identical" : "MISMATCH");
    if (!identical) return kExitError;
  }
  return kExitOk;
}

int cmd_sizing(const std::string& config_path, const std::string& out_dir) {
  const swash::RunConfig cfg = swash::load_config(config_path);
  std::filesystem::create_directories(out_dir);

  const swash::SizingSweep sweep =
      swash::phi_max_surface(cfg.sizing_betas, cfg.sizing_lengths,
                             cfg.stroke_fraction, cfg.sizing_period);
  const std::string surface_path = join_path(out_dir, cfg.surface_name);
  swash::write_surface_csv(sweep, surface_path);
  std::printf("surface: %zu x %zu cells -> %s\n", sweep.betas.size(),
              sweep.lengths.size(), surface_path.c_str());
  std::printf("monotone along mass ratio: %s\n",
              sweep.beta_monotone ? "true" : "false");
  std::printf("monotone along arm length: %s\n",
              sweep.length_monotone ? "true" : "false");

  for (const auto& [beta, length] : cfg.sizing_traces) {
    swash::DesignParams p;
    p.m = beta * p.M;
    p.m_b = p.M * (1.0 - 4.0 * beta);
    p.L = length;
    swash::TriangleSettings in;
    in.amplitude = cfg.stroke_fraction * p.L;
    in.period = cfg.sizing_period;
    const swash::PitchResponse r = swash::pitch_response(p, in);
    char name[128];
    std::snprintf(name, sizeof(name), "response_beta%g_L%g.csv", beta,
                  length);
    const std::string trace_path = join_path(out_dir, name);
    swash::write_response_csv(r, trace_path);
    std::printf("response beta=%g L=%g: peak tilt %.4f deg -> %s\n", beta,
                length, r.phi_max * 180.0 / M_PI, trace_path.c_str());
  }
  return kExitOk;
}

struct CheckRow {
  std::string name;
  std::string tolerance;
  bool pass{false};
};

int cmd_verify() {
  using namespace swash;
  std::vector<CheckRow> rows;

  {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const EulerAngles a{angle(rng), angle(rng), angle(rng)};
      const Mat3 R = rotation_body_to_inertial(a);
      const Mat3 err = R.transpose() * R - Mat3::Identity();
      worst = std::max(worst, err.cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(R.determinant() - 1.0));
    }
    rows.push_back({"rotation orthonormality and det", "1e-12", worst <= 1e-12});
  }
  {
    const Mat3 R = rotation_body_to_inertial({0.0, 0.0, 0.0});
    const bool exact = (R - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0;
    rows.push_back({"rotation identity at zero attitude", "exact", exact});
  }
  {
    const DesignParams p;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-p.L, p.L);
    const double b = p.beta();
    const double a = 0.5 - 2.0 * b;
    const double hl = p.L / 2.0;
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double lx = u(rng), ly = u(rng);
      const double masses[5][3] = {
          {p.m_b, -2.0 * b * lx, -2.0 * b * ly},
          {p.m, a * lx + hl, 0.0},
          {p.m, a * lx - hl, 0.0},
          {p.m, 0.0, a * ly + hl},
          {p.m, 0.0, a * ly - hl},
      };
      double ixx = 0.0, iyy = 0.0, izz = 0.0;
      for (const auto& q : masses) {
        ixx += q[0] * q[2] * q[2];
        iyy += q[0] * q[1] * q[1];
        izz += q[0] * (q[1] * q[1] + q[2] * q[2]);
      }
      const Mat3 I = inertia(p, lx, ly, {0.0, 0.0, 0.0});
      const auto rel = [](double x, double y) {
        return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-12});
      };
      worst = std::max({worst, rel(I(0, 0), ixx), rel(I(1, 1), iyy),
                        rel(I(2, 2), izz)});
    }
    rows.push_back({"inertia vs point-mass oracle", "1e-12 rel", worst <= 1e-12});
  }
  {
    const double I_c = constant_inertia(DesignParams{});
    rows.push_back({"constant tilt-axis inertia = 0.002", "1e-15",
                    std::abs(I_c - 0.002) <= 1e-15});
  }
  {
    SimConfig sim;
    sim.Tf = 1.0;
    const SimLog log = try_run_closed_loop(
        sim, linear_gains(), [](double) { return ReferenceSample{}; });
    double worst = 0.0;
    for (const SimRecord& r : log.records) {
      worst = std::max({worst, std::abs(r.y), std::abs(r.z)});
    }
    rows.push_back({"hover equilibrium hold (1 s)", "1e-9 m",
                    !log.diverged && worst <= 1e-9});
  }
  {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    bool ok = true;
    for (const GainSet& g : {linear_gains(), complex_gains()}) {
      for (int i = 0; i < 2000 && ok; ++i) {
        TrackingErrors e;
        e.e1 = u(rng); e.e2 = u(rng);
        e.e3 = u(rng); e.e4 = u(rng);
        e.e5 = u(rng); e.e6 = u(rng);
        for (const Subsystem sub :
             {Subsystem::altitude, Subsystem::lateral, Subsystem::pitch}) {
          if (lyapunov_vdot_check(g, sub, e) > 0.0) ok = false;
        }
      }
      const TrackingErrors zero{};
      for (const Subsystem sub :
           {Subsystem::altitude, Subsystem::lateral, Subsystem::pitch}) {
        if (lyapunov_vdot_check(g, sub, zero) != 0.0) ok = false;
      }
    }
    rows.push_back({"closed-form decay: non-positive, zero only at origin",
                    "exact", ok});
  }
  {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool ok = true;
    for (int i = 0; i < 2000; ++i) {
      const double x = u(rng);
      const double once = saturate_ell(x, 0.2);
      if (saturate_ell(once, 0.2) != once) ok = false;
    }
    rows.push_back({"stroke clamp idempotence", "exact", ok});
  }

  bool all = true;
  for (const CheckRow& row : rows) {
    std::printf("%-52s  %-10s  %s\n", row.name.c_str(), row.tolerance.c_str(),
                row.pass ? "PASS" : "FAIL");
    all = all && row.pass;
  }
  return all ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swash-mass aerial vehicle simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string model_override;
  bool seed_check = false;

  CLI::App* simulate =
      app.add_subcommand("simulate", "run a closed-loop tracking scenario");
  simulate->add_option("--config", config_path, "configuration file")
      ->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--model", model_override,
                       "override the plant model "
                       "(full2d|simplified2d|full3d)");
  simulate->add_flag("--seed-check", seed_check,
                     "run twice and compare traces byte for byte");

  CLI::App* sizing =
      app.add_subcommand("sizing", "evaluate the design surface sweep");
  sizing->add_option("--config", config_path, "configuration file")
      ->required();
  sizing->add_option("--out", out_dir, "output directory");

  CLI::App* verify =
      app.add_subcommand("verify", "run the fast invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return cmd_simulate(config_path, out_dir, model_override, seed_check);
    }
    if (sizing->parsed()) {
      return cmd_sizing(config_path, out_dir);
    }
    if (verify->parsed()) {
      return cmd_verify();
    }
  } catch (const swash::Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitError;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "unexpected error: %s\n", err.what());
    return kExitError;
  }
  return kExitError;
}
