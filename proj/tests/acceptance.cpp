// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path to qlinz executable> <bundled spec directory>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qlinz/errors.hpp"
#include "qlinz/feedback.hpp"
#include "qlinz/invertibility.hpp"
#include "qlinz/kalman.hpp"
#include "qlinz/smith.hpp"
#include "qlinz/zeros.hpp"

namespace {

using namespace qlinz;
using namespace qlinz::testing;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      failures.push_back(what);
      pass = false;
    }
  }
};

std::string cli_path;
std::string spec_dir;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Poly p(std::initializer_list<GR> c) { return Poly(std::vector<GR>(c)); }
RationalFn rf(Poly n, Poly d) { return RationalFn(std::move(n), std::move(d)); }

StateSpace float_corpus_system(std::uint64_t seed) {
  const RandomSystemOptions opts{1 + static_cast<Eigen::Index>(seed % 4),
                                 1 + static_cast<Eigen::Index>((seed / 4) % 2), seed % 5 == 0, false};
  return build_state_space(random_params(seed, opts));
}

StateSpace exact_corpus_system(std::uint64_t seed) {
  const RandomSystemOptions opts{1 + static_cast<Eigen::Index>(seed % 3),
                                 1 + static_cast<Eigen::Index>((seed / 3) % 2), seed % 4 == 0, true};
  return build_state_space(random_params(seed, opts));
}

QSystemParams passive_with_lossless(std::uint64_t seed) {
  const RandomSystemOptions opts{1 + static_cast<Eigen::Index>(seed % 2),
                                 1 + static_cast<Eigen::Index>((seed / 2) % 2), true, seed % 2 == 0};
  std::vector<Rational> freqs;
  for (std::uint64_t k = 0; k <= seed % 3; ++k) freqs.emplace_back(static_cast<long>(k + 1 + seed % 5));
  return with_lossless_modes(random_params(seed, opts), freqs);
}

bool has_exact(const Spectrum& s, const std::string& text) {
  for (const auto& v : s.values()) {
    if (v.exact && v.exact_text == text) return true;
  }
  return false;
}

bool has_near_origin(const Spectrum& s, double bound) {
  for (const auto& v : s.values()) {
    if (std::abs(v.value) < bound) return true;
  }
  return false;
}

bool refuses_for_hidden_mode(const std::function<void()>& call) {
  try {
    call();
  } catch (const RefusalError& e) {
    return std::string(e.what()).find("hidden-mode condition fails") != std::string::npos;
  }
  return false;
}

void pencil_identity_exact(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PencilIdentityReport r = verify_pencil_flat_identity(exact_corpus_system(seed));
    if (!r.pass || !r.exact) ++failures;
  }
  const double t = seconds_since(start);
  o.require(failures == 0, std::to_string(failures) + " of 100 systems disagree");
  o.require(t < 10.0, "runtime " + std::to_string(t) + " s");
  o.detail << "100 exact systems, " << t << " s";
}

void pencil_matches_flat(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const StateSpace ss = float_corpus_system(seed);
    const MultisetMatch m = match_spectra(invariant_zeros_pencil(ss), invariant_zeros_flat(ss), 1e-8);
    if (!m.matched) ++failures;
    worst = std::max(worst, m.max_discrepancy);
  }
  const double t = seconds_since(start);
  o.require(failures == 0, std::to_string(failures) + " of 100 systems disagree");
  o.require(t < 10.0, "runtime " + std::to_string(t) + " s");
  o.detail << "max discrepancy " << worst << ", " << t << " s";
}

void pole_zero_mirror(Outcome& o) {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (!verify_pole_zero_mirror(float_corpus_system(seed), 1e-7).pass) ++failures;
  }
  o.require(failures == 0, std::to_string(failures) + " of 100 systems break the mirror");
  const MirrorReport classical = verify_pole_zero_mirror(classical_example_one(), 1e-7);
  o.require(!classical.pass, "classical example one passes the mirror check");
  o.require(classical.poles.values().size() == 1 && has_exact(classical.poles, "1"), "classical poles are not {1}");
  o.require(classical.zeros.empty(), "classical example one has transmission zeros");
  o.detail << "100 systems mirrored, classical counterexample rejected";
}

void classical_example_two_sets(Outcome& o) {
  const StateSpace ss = classical_example_two();
  const RationalMatrix g = transfer_matrix_exact(ss);
  const SmithMcMillanForm smf = smith_mcmillan(g);
  RationalMatrix expected(2, 2);
  expected(0, 0) = rf(p({q(1)}), p({q(-1), q(1)}));
  expected(1, 1) = RationalFn(p({q(0), q(1)}));
  o.require(smf.diagonal() == expected, "Smith-McMillan form differs from diag(1/(s-1), s)");
  o.require(verify_reconstruction(g, smf), "unimodular factors do not reconstruct G");
  o.require(same_multiset(invariant_zeros_pencil(ss).expanded(), {0.0, 2.0}, 1e-10), "invariant zeros not {0, 2}");
  const Spectrum tz = transmission_zeros(ss);
  o.require(tz.size() == 1 && has_exact(tz, "0"), "transmission zeros not {0}");
  const Spectrum pl = poles(ss);
  o.require(pl.size() == 1 && has_exact(pl, "1"), "poles not {1}");
  o.require(same_multiset(eigenvalue_list(ss.a()), {1.0, 2.0}, 1e-12), "eigenvalues not {1, 2}");
  o.detail << "diag(1/(s-1), s); zeros {0, 2}; transmission {0}; pole {1}; eigenvalues {1, 2}";
}

void hidden_mode_example_checks(Outcome& o) {
  const StateSpace ss = hidden_mode_example();
  const RealizabilityReport r = check_physical_realizability(ss, 1e-12);
  o.require(r.pass && r.dynamics_residual <= 1e-12 && r.coupling_residual <= 1e-12, "realizability residuals");
  const KalmanReport k = kalman_decompose(ss);
  o.require(same_multiset(k.c_obar.expanded(), {-1.0}, 1e-12), "c_obar block not {-1}");
  o.require(same_multiset(k.cbar_o.expanded(), {1.0}, 1e-12), "cbar_o block not {1}");
  o.require(!check_hidden_mode_condition(k).holds, "hidden-mode condition reported as holding");
  o.require(same_multiset(invariant_zeros_pencil(ss).expanded(), {-1.0, 1.0}, 1e-10), "invariant zeros not {-1, 1}");
  o.require(refuses_for_hidden_mode([&] { invariant_zeros_via_theorem(ss); }), "zero formula did not refuse");
  o.require(refuses_for_hidden_mode([&] { classify_left_invertibility(ss); }), "invertibility did not refuse");
  o.detail << "residuals " << r.dynamics_residual << ", " << r.coupling_residual << "; both routes refuse";
}

void dpa_checks(Outcome& o) {
  const RationalMatrix g = transfer_matrix_exact(to_quadrature(dpa(2, 1)));
  RationalMatrix expected(2, 2);
  expected(0, 0) = rf(p({q(-3, 2), q(1)}), p({q(1, 2), q(1)}));
  expected(1, 1) = rf(p({q(-1, 2), q(1)}), p({q(3, 2), q(1)}));
  o.require(g == expected, "quadrature transfer is not diag((s-3/2)/(s+1/2), (s-1/2)/(s+3/2))");

  const StateSpace threshold = to_quadrature(dpa(2, 2));
  const Spectrum exact_zeros = transmission_zeros(threshold);
  const Spectrum exact_poles = poles(threshold);
  o.require(has_near_origin(exact_zeros, 1e-10) && has_exact(exact_zeros, "0"), "no exact zero at the origin");
  o.require(has_near_origin(exact_poles, 1e-10) && has_exact(exact_poles, "0"), "no exact pole at the origin");
  o.require(has_near_origin(transmission_zeros(threshold, kDefaultTol, true), 1e-10), "no numeric zero at the origin");
  o.require(has_near_origin(poles(threshold, kDefaultTol, true), 1e-10), "no numeric pole at the origin");
  o.detail << "zeros {1/2, 3/2}, poles {-1/2, -3/2}; at threshold zero and pole at 0";
}

void zero_formula_on_composites(Outcome& o) {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const StateSpace ss = build_state_space(passive_with_lossless(seed));
    if (!check_hidden_mode_condition(ss).holds) {
      ++failures;
      continue;
    }
    if (!match_spectra(invariant_zeros_via_theorem(ss), invariant_zeros_flat(ss), 1e-8).matched) ++failures;
  }
  o.require(failures == 0, std::to_string(failures) + " of 100 composites disagree");
  o.detail << "100 passive plus lossless composites";
}

void invertibility_checks(Outcome& o) {
  o.require(classify_left_invertibility(gain_system()).verdict == InvertibilityVerdict::invertible,
            "gain system not invertible");
  o.require(classify_left_invertibility(passive_cavity()).verdict == InvertibilityVerdict::not_invertible,
            "passive cavity not rejected");
  std::vector<StateSpace> corpus{gain_system(), passive_cavity(), dpa(2, 1), to_quadrature(dpa(2, 1)),
                                 hidden_mode_example()};
  for (std::uint64_t seed = 0; seed < 100; ++seed) corpus.push_back(float_corpus_system(seed));
  int failures = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto samples = random_sample_points(i, 10, 2.0);
    const InverseIdentityReport r = verify_inverse_identity(corpus[i], samples, 1e-9);
    if (!r.pass || r.checked.size() != 10) ++failures;
    worst = std::max(worst, r.max_residual);
  }
  o.require(failures == 0, std::to_string(failures) + " systems fail the inverse identity");
  o.detail << corpus.size() << " systems, max residual " << worst;
}

void feedback_duality_and_squeezing(Outcome& o) {
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ClosedLoop cl = closed_loop(random_network(seed));
    if (!check_quadrature_duality(cl.t_q, cl.t_p)) ++failures;
  }
  o.require(failures == 0, std::to_string(failures) + " of 50 networks break duality");

  const FeedbackNetwork net{QuadPlantParams::from_product(qi(-3), q(2)),
                            QuadPlantParams::from_product(qi(-1, 3), q(2)), Beamsplitter(Rational(1, 4))};
  const double t = std::abs(closed_loop(net).t_q.eval(Complex(0, 1e-6)));
  o.require(t < 1e-4, "|T_q(i 1e-6)| = " + std::to_string(t));
  const double lo = std::abs(sensitivity(net, Complex(0, 1e-3)).first);
  const double hi = std::abs(sensitivity(net, Complex(0, 1e-1)).first);
  const double slope = std::log10(lo / hi) / std::log10(1e-3 / 1e-1);
  o.require(lo / hi >= 10.0, "sensitivity growth " + std::to_string(lo / hi));
  o.require(std::abs(slope + 1.0) <= 0.1, "slope " + std::to_string(slope));
  o.detail << "|T_q(i 1e-6)| = " << t << ", growth " << lo / hi << ", slope " << slope;
}

void sensitivity_finite_difference(Outcome& o) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> log_omega(-2.0, 1.0);
  int checked = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; checked < 20 && seed < 1000; ++seed) {
    const FeedbackNetwork net = random_network(seed);
    const Complex s(0.0, std::pow(10.0, log_omega(rng)));
    std::pair<Complex, Complex> analytic;
    try {
      analytic = sensitivity(net, s);
    } catch (const PoleEvaluationError&) {
      continue;
    }
    const double alpha = net.bs.alpha.get_d();
    const auto [gq, gp] = quadrature_transfer(net.plant);
    const auto [kq, kp] = quadrature_transfer(net.controller);
    const double h = 1e-6;
    const std::array<Complex, 2> loops{gq.eval(s) * kq.eval(s), gp.eval(s) * kp.eval(s)};
    const std::array<Complex, 2> expected{analytic.first, analytic.second};
    for (int i = 0; i < 2; ++i) {
      const auto closed = [&](Complex x) { return (alpha + x) / (1.0 + alpha * x); };
      const Complex fd = (closed(loops[i] * (1.0 + h)) - closed(loops[i] * (1.0 - h))) / (2.0 * h) /
                         closed(loops[i]);
      const double rel = std::abs(fd - expected[i]) / std::abs(expected[i]);
      worst = std::max(worst, rel);
      o.require(rel <= 1e-4, "seed " + std::to_string(seed) + " relative error " + std::to_string(rel));
    }
    ++checked;
  }
  o.require(checked == 20, "only " + std::to_string(checked) + " usable frequencies");
  o.detail << checked << " frequencies, max relative error " << worst;
}

std::string capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return out + "\n<status " + std::to_string(status) + ">";
}

void cli_determinism(Outcome& o) {
  std::vector<fs::path> specs;
  for (const auto& e : fs::directory_iterator(spec_dir)) {
    if (e.path().extension() == ".json") specs.push_back(e.path());
  }
  std::sort(specs.begin(), specs.end());
  const std::string exe = "'" + cli_path + "'";
  const std::string plant = "'" + spec_dir + "/squeezing_plant.json'";
  const std::string controller = "'" + spec_dir + "/squeezing_controller.json'";
  std::vector<std::string> commands;
  for (const auto& spec : specs) {
    for (const char* cmd : {"check", "zeros", "poles", "smf", "kalman", "invert", "identities"}) {
      commands.push_back(exe + " " + cmd + " '" + spec.string() + "' --format json 2>/dev/null");
    }
  }
  commands.push_back(exe + " feedback " + plant + " " + controller + " --solve-alpha q --format json 2>/dev/null");
  commands.push_back(exe + " feedback " + plant + " " + controller + " --alpha 1/4 --sweep 1e-3:10:40 2>/dev/null");
  commands.push_back(exe + " feedback " + plant + " --synthesize - --alpha 1/4 --format json 2>/dev/null");
  int differing = 0;
  for (const auto& c : commands) {
    const std::string first = capture(c);
    if (first.find("\"command\"") == std::string::npos && first.find("omega,") == std::string::npos) {
      o.require(false, "no report from: " + c);
    }
    if (capture(c) != first) ++differing;
  }
  o.require(!specs.empty(), "no bundled specs found");
  o.require(differing == 0, std::to_string(differing) + " commands differ between runs");
  o.detail << commands.size() << " commands over " << specs.size() << " specs";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <qlinz executable> <spec directory>\n";
    return 2;
  }
  cli_path = argv[1];
  spec_dir = argv[2];

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"pencil determinant equals flat characteristic polynomial", pencil_identity_exact},
      {"pencil and flat invariant zeros agree", pencil_matches_flat},
      {"transmission zeros mirror the poles", pole_zero_mirror},
      {"classical example two zero, pole and eigenvalue sets", classical_example_two_sets},
      {"hidden-mode example realizability, blocks and refusals", hidden_mode_example_checks},
      {"degenerate parametric amplifier transfer and threshold", dpa_checks},
      {"zero formula on passive plus lossless composites", zero_formula_on_composites},
      {"left invertibility and inverse identity", invertibility_checks},
      {"feedback duality and ideal squeezing network", feedback_duality_and_squeezing},
      {"finite-difference sensitivity", sensitivity_finite_difference},
      {"deterministic CLI reports", cli_determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ": " << criteria[i].first << " ("
              << o.detail.str() << ")\n";
    for (const auto& f : o.failures) std::cout << "  " << f << '\n';
  }
  std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
