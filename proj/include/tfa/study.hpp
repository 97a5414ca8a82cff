#pragma once

// Config-driven studies for the batch runner. prepare_study() validates a
// config and checks the exponent hypotheses; the returned job computes a
// Table whose CSV form is a pure function of the config.

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tfa/convolution.hpp"
#include "tfa/corpus.hpp"
#include "tfa/gabor.hpp"
#include "tfa/modulation.hpp"
#include "tfa/periodic.hpp"
#include "tfa/wiener.hpp"

namespace tfa {

using nlohmann::json;

struct Table {
  std::string name, kind, anchor;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  json summary = json::object();

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  os << "# study: " << t.kind << "; anchor: " << t.anchor << "\n";
  for (std::size_t k = 0; k < t.header.size(); ++k) os << (k ? "," : "") << t.header[k];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
    os << "\n";
  }
  return os.str();
}

inline std::string fmt(double v) { return format_double(v); }

inline std::string fmt(const ExponentVector& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) s += (k ? " " : "") + e[k].to_string();
  return s;
}

// Object reader that rejects unknown keys and reports JSON pointers.
class ConfigReader {
 public:
  ConfigReader(const json& j, std::string pointer, std::set<std::string> allowed)
      : j_(j), ptr_(std::move(pointer)) {
    if (!j.is_object()) throw ValidationError("expected an object (at " + where() + ")");
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) throw ValidationError("unknown key '" + k + "' (at " + ptr_ + "/" + k + ")");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return ptr_ + "/" + key; }
  const json& raw(const std::string& key) const {
    if (!has(key)) throw ValidationError("missing required key '" + key + "' (at " + at(key) + ")");
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key) const {
    return convert<T>(raw(key), at(key));
  }
  template <class T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? convert<T>(j_.at(key), at(key)) : fallback;
  }

  template <class T>
  static T convert(const json& v, const std::string& pointer) {
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(std::string("malformed value: ") + e.what() + " (at " + pointer + ")");
    } catch (const InvalidArgument& e) {
      throw ValidationError(std::string(e.what()) + " (at " + pointer + ")");
    }
  }

 private:
  std::string where() const { return ptr_.empty() ? "/" : ptr_; }
  const json& j_;
  std::string ptr_;
};

namespace detail {

inline GridSpec scaled_grid(const GridSpec& g, std::size_t k) {
  auto m = g.samples_per_cell();
  for (auto& v : m) v *= k;
  return GridSpec(g.basis(), m, g.lo(), g.hi(), g.offset());
}

inline GridSpec read_grid(const ConfigReader& c, const std::string& key, std::size_t scale) {
  try {
    return scaled_grid(grid_from_json(c.raw(key)), scale);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("malformed grid: ") + e.what() + " (at " + c.at(key) + ")");
  }
}

inline std::optional<Weight> read_weight(const ConfigReader& c, const std::string& key, std::size_t dim) {
  if (!c.has(key) || c.raw(key).is_null()) return std::nullopt;
  Weight w = parse_weight(c.raw(key), c.at(key));
  if (w.dim() != dim)
    throw ValidationError("weight must have dimension " + std::to_string(dim) + " (at " + c.at(key) + ")");
  return w;
}

inline Window read_window(const ConfigReader& c, const std::string& key, std::size_t dim) {
  if (!c.has(key)) return Window::gaussian(dim, 1.0);
  return parse_window(c.raw(key), dim, c.at(key));
}

// {"kind": "gaussian"|"hermite"|"chirp", "sigma", "center", "chirp",
//  "modulation", "order"} | {"kind": "corpus", "id"} | {"kind": "trig", "poly"}
inline CorpusEntry read_signal(const json& j, const std::string& pointer, std::uint64_t seed) {
  ConfigReader c(j, pointer, {"kind", "id", "sigma", "center", "chirp", "modulation", "order", "poly"});
  const auto kind = c.get<std::string>("kind");
  if (kind == "corpus") {
    const auto id = c.get<std::string>("id");
    for (const auto& e : standard_corpus(seed))
      if (e.id == id) return e;
    throw ValidationError("unknown corpus id '" + id + "' (at " + c.at("id") + ")");
  }
  CorpusEntry e;
  e.id = c.get<std::string>("id", kind);
  if (kind == "trig") {
    e.kind = CorpusEntry::Kind::trig;
    e.poly = trig_from_json(c.raw("poly"), c.at("poly"));
    if (e.poly.dim() != 1) throw ValidationError("signals live on R (at " + c.at("poly") + ")");
    return e;
  }
  if (kind == "gaussian")
    e.kind = CorpusEntry::Kind::gaussian;
  else if (kind == "hermite")
    e.kind = CorpusEntry::Kind::hermite;
  else if (kind == "chirp")
    e.kind = CorpusEntry::Kind::chirp;
  else
    throw ValidationError("unknown signal kind '" + kind + "' (at " + c.at("kind") + ")");
  e.sigma = c.get<double>("sigma", 1.0);
  e.center = c.get<double>("center", 0.0);
  e.chirp = c.get<double>("chirp", 0.0);
  e.modulation = c.get<double>("modulation", 0.0);
  e.order = c.get<int>("order", 0);
  if (!(e.sigma > 0.0)) throw ValidationError("sigma must be positive (at " + c.at("sigma") + ")");
  if (e.order < 0) throw ValidationError("order must be nonnegative (at " + c.at("order") + ")");
  return e;
}

// Missing: the standard corpus. Otherwise an array of signals.
inline std::vector<CorpusEntry> read_corpus(const ConfigReader& c, std::uint64_t seed) {
  if (!c.has("corpus")) return standard_corpus(seed);
  const json& arr = c.raw("corpus");
  if (!arr.is_array()) throw ValidationError("corpus must be an array of signals (at " + c.at("corpus") + ")");
  std::vector<CorpusEntry> out;
  for (std::size_t k = 0; k < arr.size(); ++k)
    out.push_back(read_signal(arr[k], c.at("corpus") + "/" + std::to_string(k), seed));
  if (out.empty()) throw InvalidArgument("empty corpus");
  return out;
}

// Field on `grid`: {"window": {...}, "center": [...]} sampled directly, or
// {"stft": {"signal": ..., "window": ...}} on a phase-space grid.
inline SampledField read_field(const ConfigReader& c, const std::string& key, const GridSpec& grid,
                               std::size_t samples_per_unit, std::uint64_t seed) {
  ConfigReader f(c.raw(key), c.at(key), {"window", "center", "stft"});
  if (f.has("stft")) {
    ConfigReader s(f.raw("stft"), f.at("stft"), {"signal", "window"});
    const auto sig = read_signal(s.raw("signal"), s.at("signal"), seed);
    return stft_of(sig, read_window(s, "window", 1), grid, samples_per_unit);
  }
  const Window w = read_window(f, "window", grid.dim());
  auto center = f.get<std::vector<double>>("center", std::vector<double>(grid.dim(), 0.0));
  if (center.size() != grid.dim()) throw ValidationError("center dimension mismatch (at " + f.at("center") + ")");
  return sample(grid, [&](const Vec& x) {
    std::vector<double> y(grid.dim());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = x(Eigen::Index(k)) - center[k];
    return w(std::span<const double>(y));
  });
}

inline const std::set<std::string> common_keys = {"study", "name", "seed", "anchor"};

inline std::set<std::string> keys(std::initializer_list<std::string> extra) {
  std::set<std::string> s = common_keys;
  s.insert(extra.begin(), extra.end());
  return s;
}

}  // namespace detail

struct PreparedStudy {
  std::string name, kind;
  std::function<Table()> run;
};

inline PreparedStudy prepare_study(const json& cfg, const std::string& pointer = "", std::size_t scale = 1) {
  using namespace detail;
  if (!cfg.is_object() || !cfg.contains("study"))
    throw ValidationError("study config requires a 'study' kind (at " + pointer + "/study)");
  const auto kind = ConfigReader::convert<std::string>(cfg.at("study"), pointer + "/study");
  const auto name = cfg.contains("name") ? ConfigReader::convert<std::string>(cfg.at("name"), pointer + "/name") : kind;
  if (name.empty() || name.find_first_of("/\\") != std::string::npos)
    throw ValidationError("study name must be a plain file stem (at " + pointer + "/name)");
  const auto seed = cfg.contains("seed") ? ConfigReader::convert<std::uint64_t>(cfg.at("seed"), pointer + "/seed")
                                         : std::uint64_t(0x5EED);
  if (scale == 0) throw InvalidArgument("resolution scale must be at least 1");
  PreparedStudy p{name, kind, {}};
  auto table = [name, kind](std::string anchor, std::vector<std::string> header) {
    Table t;
    t.name = name;
    t.kind = kind;
    t.anchor = std::move(anchor);
    t.header = std::move(header);
    return t;
  };

  if (kind == "stft") {
    ConfigReader c(cfg, pointer, keys({"signal", "window", "phase_grid", "samples_per_unit"}));
    const auto sig = read_signal(c.raw("signal"), c.at("signal"), seed);
    const auto w = read_window(c, "window", 1);
    const auto grid = read_grid(c, "phase_grid", scale);
    const auto spu = c.get<std::size_t>("samples_per_unit", 16) * scale;
    p.run = [=] {
      const auto V = stft_of(sig, w, grid, spu);
      Table t = table("short-time Fourier transform", {"x", "xi", "re", "im", "abs"});
      for (std::size_t i = 0; i < V.size(); ++i) {
        const Vec X = grid.point(i);
        t.add({fmt(X(0)), fmt(X(1)), fmt(V.values[i].real()), fmt(V.values[i].imag()), fmt(std::abs(V.values[i]))});
      }
      return t;
    };
  } else if (kind == "norm") {
    ConfigReader c(cfg, pointer, keys({"field", "grid", "norms", "samples_per_unit"}));
    const auto grid = read_grid(c, "grid", scale);
    const auto spu = c.get<std::size_t>("samples_per_unit", 16) * scale;
    const auto field = read_field(c, "field", grid, spu, seed);
    std::vector<MixedNormSpec> specs;
    const json& arr = c.raw("norms");
    if (!arr.is_array() || arr.empty()) throw ValidationError("norms must be a nonempty array (at " + c.at("norms") + ")");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      ConfigReader n(arr[k], c.at("norms") + "/" + std::to_string(k), {"exponents", "weight", "permutation"});
      MixedNormSpec s{grid.basis(), n.get<ExponentVector>("exponents"), read_weight(n, "weight", grid.dim()), {},
                      n.get<std::vector<std::size_t>>("permutation", {})};
      if (s.exponents.size() != grid.dim()) throw ValidationError("exponent count mismatch (at " + n.at("exponents") + ")");
      specs.push_back(std::move(s));
    }
    p.run = [=] {
      Table t = table("mixed Lebesgue quasi-norm", {"index", "exponents", "weighted", "value"});
      for (std::size_t k = 0; k < specs.size(); ++k)
        t.add({std::to_string(k), fmt(specs[k].exponents), specs[k].weight ? "1" : "0", fmt(mixed_norm(field, specs[k]))});
      return t;
    };
  } else if (kind == "wiener") {
    ConfigReader c(cfg, pointer, keys({"field", "grid", "cells", "local", "global", "weight", "samples_per_unit"}));
    const auto grid = read_grid(c, "grid", scale);
    const auto spu = c.get<std::size_t>("samples_per_unit", 16) * scale;
    const auto field = read_field(c, "field", grid, spu, seed);
    const auto cells = c.has("cells") ? c.get<OrderedBasis>("cells") : grid.basis();
    const auto locals = c.get<std::vector<ExponentVector>>("local");
    const auto global = c.get<ExponentVector>("global");
    const auto omega0 = read_weight(c, "weight", grid.dim());
    p.run = [=] {
      Table t = table("Wiener amalgam quasi-norm", {"local", "global", "value"});
      for (const auto& r : locals) t.add({fmt(r), fmt(global), fmt(wiener_norm(field, {r, cells, {global, omega0, {}}}))});
      return t;
    };
  } else if (kind == "modnorm") {
    ConfigReader c(cfg, pointer, keys({"signal", "window", "phase_grid", "norms", "samples_per_unit"}));
    const auto sig = read_signal(c.raw("signal"), c.at("signal"), seed);
    const auto w = read_window(c, "window", 1);
    const auto grid = read_grid(c, "phase_grid", scale);
    const auto spu = c.get<std::size_t>("samples_per_unit", 16) * scale;
    std::vector<ModSpec> specs;
    const json& arr = c.raw("norms");
    if (!arr.is_array() || arr.empty()) throw ValidationError("norms must be a nonempty array (at " + c.at("norms") + ")");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      ConfigReader n(arr[k], c.at("norms") + "/" + std::to_string(k), {"p", "q", "flavor", "weight"});
      const auto fl = n.get<std::string>("flavor", "M");
      if (fl != "M" && fl != "W") throw ValidationError("flavor must be M or W (at " + n.at("flavor") + ")");
      specs.push_back({grid.basis(), n.get<ExponentVector>("p"), n.get<ExponentVector>("q"),
                       read_weight(n, "weight", 2), fl == "M" ? Flavor::M : Flavor::W, sig.decays()});
    }
    p.run = [=] {
      const auto V = stft_of(sig, w, grid, spu);
      Table t = table("modulation space quasi-norm", {"flavor", "p", "q", "value"});
      for (const auto& s : specs)
        t.add({s.flavor == Flavor::M ? "M" : "W", fmt(s.p), fmt(s.q), fmt(mod_norm(V, s))});
      return t;
    };
  } else if (kind == "coeffs") {
    ConfigReader c(cfg, pointer, keys({"polys", "q", "weight", "window", "samples"}));
    std::vector<std::pair<std::string, TrigPolynomial>> polys;
    if (c.has("polys")) {
      const json& arr = c.raw("polys");
      if (!arr.is_array()) throw ValidationError("polys must be an array (at " + c.at("polys") + ")");
      for (std::size_t k = 0; k < arr.size(); ++k)
        polys.emplace_back("poly_" + std::to_string(k), trig_from_json(arr[k], c.at("polys") + "/" + std::to_string(k)));
    } else {
      polys = trig_corpus(seed);
    }
    if (polys.empty()) throw InvalidArgument("empty corpus");
    const auto qs = c.get<std::vector<ExponentVector>>("q");
    const auto samples = c.get<std::size_t>("samples", 16) * scale;
    const auto dim = polys.front().second.dim();
    const auto omega0 = read_weight(c, "weight", dim);
    const auto w = read_window(c, "window", dim);
    p.run = [=] {
      Table t = table("coefficient norms of periodic distributions",
                      {"id", "q", "coefficient_norm", "roundtrip_error", "action_re", "action_im"});
      for (const auto& [id, f] : polys) {
        const auto [lo, hi] = f.index_hull();
        const auto back = fourier_coefficients(synthesize(f, samples), f.period_basis(), lo, hi);
        double err = 0.0;
        for (const auto& [nu, cf] : f.coefficients()) err = std::max(err, std::abs(back.coefficient(nu) - cf));
        const cplx act = distribution_action(f, w);
        for (const auto& q : qs)
          t.add({id, fmt(q), fmt(coefficient_norm(f, q, omega0)), fmt(err), fmt(act.real()), fmt(act.imag())});
      }
      return t;
    };
  } else if (kind == "equiv-wiener-r") {
    ConfigReader c(cfg, pointer, keys({"phase_grid", "p", "rs", "weight", "window1", "window2", "samples_per_unit",
                                       "corpus"}));
    const auto corpus = read_corpus(c, seed);
    EquivalenceSpec s{read_grid(c, "phase_grid", scale), c.get<ExponentVector>("p"), read_weight(c, "weight", 2),
                      c.get<std::vector<double>>("rs"), c.get<std::size_t>("samples_per_unit", 16) * scale};
    if (s.p.size() != 2) throw ValidationError("p must be (p_x, p_xi) (at " + c.at("p") + ")");
    const auto w1 = read_window(c, "window1", 1), w2 = c.has("window2") ? read_window(c, "window2", 1) : w1;
    p.run = [=] {
      const auto rep = equivalence_study(corpus, s, w1, w2);
      std::vector<std::string> header = {"id", "lebesgue", "wiener_inf"};
      for (double r : s.rs) header.push_back("ratio_r" + fmt(r));
      Table t = table("Wiener norms of short-time Fourier transforms, independence of r", header);
      for (const auto& row : rep.rows) {
        std::vector<std::string> line = {row.id, fmt(row.lebesgue), fmt(row.wiener_inf)};
        for (double v : row.ratio) line.push_back(fmt(v));
        t.add(line);
      }
      std::vector<std::string> spread = {"spread", fmt(rep.lebesgue_spread), "1"};
      for (double v : rep.spread) spread.push_back(fmt(v));
      t.add(spread);
      t.summary["spread"] = rep.spread;
      t.summary["lebesgue_spread"] = rep.lebesgue_spread;
      return t;
    };
  } else if (kind == "equiv-periodic") {
    ConfigReader c(cfg, pointer, keys({"q", "r", "weight", "window", "m_x", "m_xi", "polys"}));
    std::vector<std::pair<std::string, TrigPolynomial>> polys;
    if (c.has("polys")) {
      const json& arr = c.raw("polys");
      if (!arr.is_array()) throw ValidationError("polys must be an array (at " + c.at("polys") + ")");
      for (std::size_t k = 0; k < arr.size(); ++k)
        polys.emplace_back("poly_" + std::to_string(k), trig_from_json(arr[k], c.at("polys") + "/" + std::to_string(k)));
      if (polys.empty()) throw InvalidArgument("empty corpus");
    } else {
      polys = trig_corpus(seed);
    }
    const auto dim = polys.front().second.dim();
    PeriodicSpec s{c.get<ExponentVector>("q"), c.get<ExponentVector>("r"), read_weight(c, "weight", dim),
                   c.get<std::size_t>("m_x", 16) * scale, c.get<std::size_t>("m_xi", 8) * scale};
    const auto w = read_window(c, "window", dim);
    p.run = [=] {
      const auto rep = periodic_equivalence_study(polys, w, s);
      Table t = table("periodic elements of modulation spaces",
                      {"id", "coefficients", "script_m", "script_w", "m_inf", "w_inf", "interleaved", "double_integral"});
      for (const auto& row : rep.rows) {
        const auto& n = row.norms;
        t.add({row.id, fmt(n.coefficients), fmt(n.script_m), fmt(n.script_w), fmt(n.m_inf), fmt(n.w_inf),
               fmt(n.interleaved), n.double_integral ? fmt(*n.double_integral) : ""});
      }
      t.add({"spread", "1", fmt(rep.spread_script_m), fmt(rep.spread_script_w), fmt(rep.spread_m_inf),
             fmt(rep.spread_w_inf), fmt(rep.spread_interleaved),
             rep.spread_double_integral ? fmt(*rep.spread_double_integral) : ""});
      return t;
    };
  } else if (kind == "embedding-rel1") {
    ConfigReader c(cfg, pointer, keys({"p", "q", "r", "r1", "r2", "weight", "phase_grid", "window",
                                       "samples_per_unit", "corpus"}));
    EmbeddingSpec s{c.get<ExponentVector>("p"), c.get<ExponentVector>("q"), c.get<ExponentVector>("r"),
                    c.get<double>("r1"), c.get<double>("r2"), read_weight(c, "weight", 2)};
    check_embedding_hypotheses(s);
    const auto corpus = read_corpus(c, seed);
    const auto grid = read_grid(c, "phase_grid", scale);
    const auto w = read_window(c, "window", 1);
    const auto spu = c.get<std::size_t>("samples_per_unit", 16) * scale;
    p.run = [=] {
      Table t = table("embeddings between two-variable Wiener spaces",
                      {"id", "chain1_left", "chain1_middle", "chain1_right", "chain2_left", "chain2_middle",
                       "chain2_right"});
      double lm = 0.0, mr1 = 0.0, mr2 = 0.0;
      for (const auto& f : corpus) {
        const auto r = embedding_check_rel1(stft_of(f, w, grid, spu), s);
        t.add({f.id, fmt(r.chain1.left), fmt(r.chain1.middle), fmt(r.chain1.right), fmt(r.chain2.left),
               fmt(r.chain2.middle), fmt(r.chain2.right)});
        lm = std::max({lm, r.chain1.ratio_lm(), r.chain2.ratio_lm()});
        mr1 = std::max(mr1, r.chain1.ratio_mr());
        mr2 = std::max(mr2, r.chain2.ratio_mr());
      }
      t.summary["max_first_ratio"] = lm;
      t.summary["second_constant_chain1"] = mr1;
      t.summary["second_constant_chain2"] = mr2;
      return t;
    };
  } else if (kind == "young") {
    ConfigReader c(cfg, pointer, keys({"cells", "periodic", "p", "r", "weight", "v", "batches", "samples_per_cell",
                                       "f_radius", "a_radius", "nonnegative"}));
    YoungStudySpec s;
    s.young.cells = c.get<OrderedBasis>("cells");
    const auto d = s.young.cells.dim();
    s.young.periodic = c.get<std::vector<bool>>("periodic", std::vector<bool>(d, false));
    s.young.p = c.get<ExponentVector>("p");
    s.young.r = c.get<ExponentVector>("r");
    s.young.omega = read_weight(c, "weight", d);
    s.young.v = read_weight(c, "v", d);
    s.batches = c.get<std::size_t>("batches", 50);
    s.samples_per_cell = c.get<std::size_t>("samples_per_cell", 8) * scale;
    s.f_radius = c.get<std::int64_t>("f_radius", 2);
    s.a_radius = c.get<std::int64_t>("a_radius", 3);
    s.nonnegative = c.get<bool>("nonnegative", false);
    s.seed = seed;
    check_young_hypotheses(s.young);
    p.run = [=] {
      const auto rep = young_batch_study(s);
      Table t = table("Lebesgue estimate for semi-discrete convolutions", {"batch", "lhs", "a_norm", "f_norm", "constant"});
      for (std::size_t b = 0; b < rep.batches.size(); ++b) {
        const auto& m = rep.batches[b];
        t.add({std::to_string(b), fmt(m.lhs), fmt(m.a_norm), fmt(m.f_norm), fmt(m.constant())});
      }
      t.summary["max_constant"] = rep.max_constant;
      t.summary["min_constant"] = rep.min_constant;
      return t;
    };
  } else if (kind == "gabor-dual") {
    ConfigReader c(cfg, pointer, keys({"L", "a", "b", "window", "window0", "refinement", "signals"}));
    const auto L = c.get<std::size_t>("L");
    const auto a = c.get<std::size_t>("a"), b = c.get<std::size_t>("b");
    const auto g = sample_periodic(read_window(c, "window", 1), L);
    const auto g0 = c.has("window0") ? sample_periodic(read_window(c, "window0", 1), L) : g;
    const auto n = c.get<std::size_t>("refinement", 1);
    const auto signals = c.get<std::size_t>("signals", 50);
    GaborSystem(g, a, b);
    p.run = [=] {
      const GaborSystem G(g, a, b);
      auto rep = frame_bounds(G);
      rep.n_min = smallest_frame_refinement(g, a, b);
      const auto dual = canonical_dual(G);
      const GaborSystem D(dual.window, a, b);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      double recon = 0.0;
      std::vector<cplx> f(L);
      for (std::size_t k = 0; k < signals; ++k) {
        for (auto& v : f) v = {u(rng), u(rng)};
        const auto back = reconstruct(f, G, D);
        for (std::size_t i = 0; i < L; ++i) recon = std::max(recon, std::abs(back[i] - f[i]));
      }
      for (auto& v : f) v = {u(rng), u(rng)};
      const auto dom = window_change_domination(f, G, g0, n);
      Table t = table("Gabor frames and canonical duals", {"quantity", "value"});
      t.add({"A", fmt(rep.A)});
      t.add({"B", fmt(rep.B)});
      t.add({"condition", fmt(rep.condition)});
      t.add({"n_min", rep.n_min ? std::to_string(*rep.n_min) : "none"});
      t.add({"dual_iterations", std::to_string(dual.iterations)});
      t.add({"dual_residual", fmt(dual.residual)});
      t.add({"max_reconstruction_error", fmt(recon)});
      t.add({"domination_defect", fmt(dom.defect)});
      t.add({"domination_terms", std::to_string(dom.terms)});
      t.summary = {{"A", rep.A}, {"B", rep.B}, {"condition", rep.condition}};
      t.summary["n_min"] = rep.n_min ? json(*rep.n_min) : json(nullptr);
      return t;
    };
  } else {
    throw ValidationError("unknown study kind '" + kind + "' (at " + pointer + "/study)");
  }
  return p;
}

// A config is one study object or {"studies": [...]}.
inline std::vector<PreparedStudy> prepare_config(const json& cfg, std::size_t scale = 1) {
  std::vector<PreparedStudy> out;
  if (cfg.is_object() && cfg.contains("studies")) {
    ConfigReader c(cfg, "", {"studies"});
    const json& arr = c.raw("studies");
    if (!arr.is_array() || arr.empty()) throw ValidationError("studies must be a nonempty array (at /studies)");
    for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(prepare_study(arr[k], "/studies/" + std::to_string(k), scale));
  } else {
    out.push_back(prepare_study(cfg, "", scale));
  }
  std::set<std::string> names;
  for (const auto& p : out)
    if (!names.insert(p.name).second) throw ValidationError("duplicate study name '" + p.name + "'");
  return out;
}

}  // namespace tfa
