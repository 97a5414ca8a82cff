// Acceptance criteria AC1-AC10. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "test_support.hpp"
#include "tfa/tfa.hpp"

#ifndef TFA_CLI_PATH
#error "TFA_CLI_PATH must name the CLI binary"
#endif
#ifndef TFA_STUDIES_DIR
#error "TFA_STUDIES_DIR must name the bundled studies directory"
#endif

using namespace tfa;
namespace fs = std::filesystem;

namespace {

const double inf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_change(double a, double b) { return std::abs(b - a) / std::abs(a); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SampledField gaussian_signal(double sigma = 1.0) {
  const GridSpec g(OrderedBasis::standard(1), {16}, {-20}, {19});
  const auto w = Window::gaussian(1, sigma);
  return sample(g, [&](const Vec& t) { return cplx{w({t(0)})}; });
}

TrigPolynomial single_exponential() {
  TrigPolynomial t(OrderedBasis::from_vectors({{two_pi}}));
  t.set({1}, 1.0);
  return t;
}

// STFT of the Gaussian pair against its closed form on [-8,8]^2, step 0.05.
void ac1(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec phase(OrderedBasis::standard(2), {20}, {-8, -8}, {7, 7});
  const auto V = stft(gaussian_signal(), Window::gaussian(1, 1.0), phase);
  const double elapsed = seconds_since(t0);
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const Vec X = phase.point(i);
    const double x = X(0), xi = X(1);
    const cplx want = std::polar(std::exp(-(x * x + xi * xi) / 4) / std::sqrt(two_pi), -x * xi / 2);
    worst = std::max(worst, std::abs(V.values[i] - want));
    peak = std::max(peak, std::abs(want));
  }
  v.detail << "sup relative error " << num(worst / peak) << ", " << num(elapsed) << " s";
  v.require(worst / peak <= 1e-6, "error");
  v.require(elapsed <= 30.0, "runtime");
}

void ac2(Verdict& v) {
  const GridSpec phase(OrderedBasis::standard(2), {8}, {-8, -8}, {7, 7});
  const auto V = stft(gaussian_signal(), Window::gaussian(1, 1.0), phase);
  const double moyal = mod_norm(V, {OrderedBasis::standard(2), {2.0}, {2.0}, {}, Flavor::M, true});
  const GridSpec torus(OrderedBasis::from_vectors({{two_pi, 0.0}, {0.0, 1.0}}), {8}, {0, -8}, {0, 9});
  const auto E = stft_trigpoly(single_exponential(), Window::gaussian(1, 1.0), torus);
  const double m_inf2 = mod_norm(E, {torus.basis(), {inf}, {2.0}, {}, Flavor::M, false});
  v.detail << "Moyal " << format_double(moyal) << ", M^{inf,2}(e^{it}) " << format_double(m_inf2);
  v.require(std::abs(moyal - 1.0) <= 1e-6, "Moyal");
  v.require(std::abs(m_inf2 - 1.0) <= 1e-6, "single exponential");
}

void ac3(Verdict& v) {
  const auto phi = Window::gaussian(1, 1.0);
  double worst = 0.0;
  std::size_t cases = 0;
  for (const auto& [id, f] : trig_corpus())
    for (double r : {0.5, 1.0, 2.0, inf}) {
      worst = std::max(worst, periodicity_defect(f, phi, {r}));
      ++cases;
    }
  v.detail << cases << " cases, max relative variation " << num(worst);
  v.require(cases == 24, "case count");
  v.require(worst <= 1e-9, "variation");
}

// Sampled fields are piecewise constant on their sample cells.
void ac4(Verdict& v) {
  auto rng = testing::make_rng(404);
  const GridSpec g(OrderedBasis::standard(2), {4}, {-2, -1}, {1, 2});
  double worst = 0.0;
  std::size_t cases = 0;
  for (const ExponentVector& p : {ExponentVector{0.5, 1.0}, ExponentVector{1.0, inf}, ExponentVector{2.0, 2.0}})
    for (int t = 0; t < 100; ++t) {
      const auto f = testing::random_field(rng, g);
      const double r = std::min(p.min(), 1.0) * (t % 2 ? 1.0 : 0.5);
      const auto a = local_norms(f, OrderedBasis::standard(2), ExponentVector::uniform(Exponent(r), 2));
      const MixedNormSpec lp{OrderedBasis::standard(2), p, {}, {}, {}};
      worst = std::max(worst, discrete_mixed_norm(a, p) / mixed_norm(f, lp));
      ++cases;
    }
  v.detail << cases << " fields, max ||a||/||f|| " << format_double(worst);
  v.require(worst <= 1.0 + 1e-9, "bound");
}

void ac5(Verdict& v) {
  const auto corpus = standard_corpus();
  const std::vector<EmbeddingSpec> specs = {{{2.0}, {1.0}, {inf}, 1.0, 1.0, {}},
                                            {{0.5}, {2.0}, {1.0}, 0.5, 2.0, {}},
                                            {{inf}, {inf}, {2.0}, 0.5, 1.0, {}},
                                            {{1.0}, {0.5}, {0.5}, 0.5, 0.5, {}}};
  double first = 0.0, change = 0.0;
  for (const auto& s : specs) {
    double mr[2][2] = {};
    for (std::size_t level = 0; level < 2; ++level) {
      const std::size_t m = level ? 16 : 8;
      const GridSpec ph(OrderedBasis::scaled_standard(2, std::sqrt(two_pi)), {m}, {-10, -10}, {9, 9});
      for (const auto& f : corpus) {
        const auto r = embedding_check_rel1(stft_of(f, Window::gaussian(1, 1.0), ph, 2 * m), s);
        first = std::max({first, r.chain1.ratio_lm(), r.chain2.ratio_lm()});
        mr[level][0] = std::max(mr[level][0], r.chain1.ratio_mr());
        mr[level][1] = std::max(mr[level][1], r.chain2.ratio_mr());
      }
    }
    change = std::max({change, rel_change(mr[0][0], mr[1][0]), rel_change(mr[0][1], mr[1][1])});
  }
  v.detail << "max first-inequality ratio " << format_double(first) << ", max constant change " << num(change);
  v.require(first <= 1.0 + 1e-9, "first inequality");
  v.require(change <= 0.10, "refinement");
}

void ac6(Verdict& v) {
  const auto corpus = standard_corpus();
  const std::vector<double> rs = {0.5, 1.0, inf};
  double lo = inf, hi = 0.0, change = 0.0;
  for (const ExponentVector& p : {ExponentVector{0.5, 0.5}, ExponentVector{1.0, 2.0}, ExponentVector{inf, 1.0}}) {
    auto run = [&](std::size_t m, const Window& w) {
      const EquivalenceSpec s{
          GridSpec(OrderedBasis::scaled_standard(2, std::sqrt(two_pi)), {m}, {-10, -10}, {9, 9}), p, {}, rs, 2 * m};
      const auto rep = equivalence_study(corpus, s, w, w);
      for (const auto& row : rep.rows)
        for (double x : row.ratio) {
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      return rep.spread;
    };
    const auto base = run(8, Window::gaussian(1, 1.0));
    const auto fine = run(16, Window::gaussian(1, 1.0));
    const auto swap = run(8, Window::hermite(1, 0, 1.1));
    for (std::size_t k = 0; k < rs.size(); ++k)
      change = std::max({change, rel_change(base[k], fine[k]), rel_change(base[k], swap[k])});
  }
  v.detail << "ratios in [" << format_double(lo) << ", " << format_double(hi) << "], max spread change " << num(change);
  v.require(lo > 0.0 && hi <= 1.0 + 1e-9, "one-sided bound");
  v.require(change <= 0.10, "spread stability");
}

void ac7(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t L = 64;
  const auto g = sample_periodic(Window::gaussian(1, 1.0), L);
  const GaborSystem G(g, 4, 8);
  const auto report = frame_bounds(G);
  const auto dual = canonical_dual(G);
  const GaborSystem D(dual.window, 4, 8);
  auto rng = testing::make_rng(707);
  double recon = 0.0, defect = -inf;
  std::vector<cplx> f(L);
  for (int k = 0; k < 50; ++k) {
    for (auto& x : f) x = {testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)};
    const auto back = reconstruct(f, G, D);
    for (std::size_t i = 0; i < L; ++i) recon = std::max(recon, std::abs(back[i] - f[i]));
  }
  for (const auto& w0 : {Window::hermite(1, 1, 1.0), Window::gaussian(1, 1.5), Window::hermite(1, 2, 0.8)})
    for (std::size_t n : {1, 2}) {
      for (auto& x : f) x = {testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1)};
      defect = std::max(defect, window_change_domination(f, G, sample_periodic(w0, L), n).defect);
    }
  const double elapsed = seconds_since(t0);
  v.detail << "A " << num(report.A) << " B " << num(report.B) << ", reconstruction " << num(recon)
           << ", domination defect " << num(defect) << ", " << num(elapsed) << " s";
  v.require(report.frame, "frame verdict");
  v.require(recon <= 1e-8, "reconstruction");
  v.require(defect <= 1e-6, "domination");
  v.require(elapsed <= 60.0, "runtime");
}

void ac8(Verdict& v) {
  struct Setting {
    YoungSpec young;
    bool nonnegative;
  };
  const std::vector<Setting> settings = {
      {{OrderedBasis::standard(1), {false}, {1.0}, {1.0}, {}, {}}, false},
      {{OrderedBasis::standard(1), {false}, {0.5}, {0.5}, {}, {}}, false},
      {{OrderedBasis::standard(2), {true, false}, {1.0, 2.0}, {1.0, 1.0}, {}, {}}, false},
      {{OrderedBasis::standard(1), {false}, {1.0}, {1.0}, {}, {}}, true},
  };
  double worst = 0.0, change = 0.0, equality = 0.0;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    double maxc[2];
    for (std::size_t level = 0; level < 2; ++level) {
      YoungStudySpec s;
      s.young = settings[k].young;
      s.batches = 50;
      s.samples_per_cell = level ? 16 : 8;
      s.nonnegative = settings[k].nonnegative;
      s.seed = 800 + k;
      const auto rep = young_batch_study(s);
      maxc[level] = rep.max_constant;
      worst = std::max(worst, rep.max_constant);
      if (settings[k].nonnegative)
        for (const auto& b : rep.batches) equality = std::max(equality, std::abs(b.constant() - 1.0));
    }
    change = std::max(change, rel_change(maxc[0], maxc[1]));
  }
  v.detail << "max constant " << format_double(worst) << ", max refinement change " << num(change)
           << ", equality defect " << num(equality);
  v.require(worst <= 1.0 + 1e-9, "bound");
  v.require(change <= 0.10, "refinement");
  v.require(equality <= 1e-10, "equality");
}

std::vector<double> norm_columns(const PeriodicNorms& n) {
  std::vector<double> c = {n.coefficients, n.script_m, n.script_w, n.m_inf, n.w_inf, n.interleaved};
  if (n.double_integral) c.push_back(*n.double_integral);
  return c;
}

void ac9(Verdict& v) {
  const auto phi = Window::gaussian(1, 1.0);
  const auto corpus = trig_corpus();
  bool finite = true;
  double scale_dev = 0.0, shift_dev = 0.0, change = 0.0;
  std::size_t settings = 0;
  for (double q : {0.5, 1.0, 2.0})
    for (double r : {0.5, q, inf})
      for (int weighted = 0; weighted < 2; ++weighted) {
        std::optional<Weight> w0;
        if (weighted) w0 = Weight::polynomial(1, 1.0);
        ++settings;
        std::vector<std::vector<double>> ratios[2];
        for (std::size_t level = 0; level < 2; ++level) {
          const PeriodicSpec s{{q}, {r}, w0, level ? 32u : 16u, level ? 16u : 8u};
          for (const auto& [id, f] : corpus) {
            const auto c = norm_columns(periodic_norms(f, phi, s));
            std::vector<double> pr;
            for (std::size_t i = 0; i < c.size(); ++i)
              for (std::size_t j = i + 1; j < c.size(); ++j) {
                pr.push_back(c[i] / c[j]);
                finite = finite && std::isfinite(pr.back()) && pr.back() > 0.0;
              }
            ratios[level].push_back(pr);
            if (level) continue;
            const auto cs = norm_columns(periodic_norms(f.scaled({-3.0, 4.0}), phi, s));
            for (std::size_t i = 0; i < c.size(); ++i)
              for (std::size_t j = i + 1; j < c.size(); ++j)
                scale_dev = std::max(scale_dev, rel_change(c[i] / c[j], cs[i] / cs[j]));
            if (weighted) continue;
            const auto ch = norm_columns(periodic_norms(f.frequency_shifted({4}), phi, s));
            for (std::size_t i = 0; i < c.size(); ++i)
              for (std::size_t j = i + 1; j < c.size(); ++j)
                shift_dev = std::max(shift_dev, rel_change(c[i] / c[j], ch[i] / ch[j]));
          }
        }
        const std::size_t pairs = ratios[0].front().size();
        for (std::size_t k = 0; k < pairs; ++k) {
          double spread[2];
          for (std::size_t level = 0; level < 2; ++level) {
            std::vector<double> col;
            for (const auto& row : ratios[level]) col.push_back(row[k]);
            spread[level] = spread_of(col);
          }
          change = std::max(change, rel_change(spread[0], spread[1]));
        }
      }
  const auto anchor = periodic_norms(single_exponential(), phi, {{2.0}, {inf}, {}, 16, 8});
  double anchor_dev = 0.0;
  for (double c : norm_columns(anchor)) anchor_dev = std::max(anchor_dev, std::abs(c / anchor.coefficients - 1.0));
  v.detail << settings << " settings, scale " << num(scale_dev) << ", shift " << num(shift_dev) << ", spread change "
           << num(change) << ", anchor " << num(anchor_dev);
  v.require(finite, "finite ratios");
  v.require(scale_dev <= 1e-12, "scale invariance");
  v.require(shift_dev <= 1e-9, "shift invariance");
  v.require(change <= 0.05, "spread stability");
  v.require(anchor_dev <= 1e-6, "anchor");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void ac10(Verdict& v) {
  const fs::path work = fs::temp_directory_path() / "tfa_acceptance_ac10";
  fs::remove_all(work);
  std::size_t studies = 0, reports = 0;
  std::vector<fs::path> configs;
  for (const auto& e : fs::directory_iterator(TFA_STUDIES_DIR))
    if (e.path().extension() == ".json") configs.push_back(e.path());
  std::sort(configs.begin(), configs.end());
  for (const auto& cfg : configs) {
    ++studies;
    const auto stem = cfg.stem().string();
    for (const char* run : {"a", "b"}) {
      const std::string cmd = std::string("\"") + TFA_CLI_PATH + "\" run \"" + cfg.string() + "\" --out \"" +
                              (work / stem / run).string() + "\" > /dev/null 2>&1";
      v.require(std::system(cmd.c_str()) == 0, stem + " run " + run);
    }
    if (!fs::exists(work / stem / "a")) continue;
    for (const auto& e : fs::directory_iterator(work / stem / "a")) {
      ++reports;
      const auto other = work / stem / "b" / e.path().filename();
      v.require(fs::exists(other) && slurp(e.path()) == slurp(other), e.path().filename().string());
    }
  }
  fs::remove_all(work);
  v.detail << studies << " configs, " << reports << " reports compared";
  v.require(studies > 0 && reports > 0, "nothing compared");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Verdict&)>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      fn(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %s: %s\n", name, v.pass ? "PASS" : "FAIL", v.detail.str().c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures ? 1 : 0;
}
