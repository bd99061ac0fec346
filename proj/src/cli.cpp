#include "mproj/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mproj/baselocus.hpp"
#include "mproj/cohomo.hpp"
#include "mproj/corpus.hpp"
#include "mproj/errors.hpp"
#include "mproj/kerbundle.hpp"
#include "mproj/mingen.hpp"

namespace mproj {

namespace {

struct RunConfig {
  std::uint64_t modulus = PrimeField::kDefaultModulus;
  std::uint64_t seed = 0;
  std::size_t seeds = 20;
  unsigned threads = 0;
  std::vector<int> box;
  std::string format = "json";
  std::string out;

  CampaignConfig campaign() const {
    if (seeds == 0) throw ConfigError("--seeds must be at least 1");
    PrimeField check(modulus);
    CampaignConfig c;
    c.seed = seed;
    c.seeds = seeds;
    c.modulus = modulus;
    c.threads = threads;
    return c;
  }

  std::optional<MultiIndex> box_upper() const {
    if (box.empty()) return std::nullopt;
    return MultiIndex(box);
  }
};

struct SchemeSource {
  std::string file;
  std::vector<int> space;
  std::size_t z = 0;
  std::string kind = "reduced";
};

ZeroScheme load_scheme(const SchemeSource& src, const RunConfig& cfg) {
  const PrimeField f(cfg.modulus);
  if (!src.file.empty()) {
    std::ifstream in(src.file);
    if (!in) throw std::invalid_argument("cannot read " + src.file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(src.file, e.what());
    }
    return scheme_from_json(j, f);
  }
  if (src.space.empty()) throw std::invalid_argument("give --scheme FILE or --space with --z");
  return random_general(Space(src.space), src.z, parse_kind(src.kind), cfg.seed, f);
}

void add_scheme_options(CLI::App* cmd, SchemeSource& src) {
  cmd->add_option("--scheme", src.file, "scheme JSON file");
  cmd->add_option("--space", src.space, "random scheme: factor dimensions")->delimiter(',');
  cmd->add_option("--z", src.z, "random scheme: number of components");
  cmd->add_option("--kind", src.kind, "random scheme: reduced, tangent or double");
}

Box chosen_box(const RunConfig& cfg, const ZeroScheme& z) {
  if (cfg.box.empty()) return report_box(z);
  if (cfg.box.size() != z.space().k()) throw DimensionMismatch("--box needs one entry per factor");
  return Box(MultiIndex(cfg.box));
}

void check_format(const RunConfig& cfg, bool csv_ok) {
  if (cfg.format == "json" || cfg.format == "text" || (csv_ok && cfg.format == "csv")) return;
  throw std::invalid_argument("unsupported --format " + cfg.format);
}

std::string regions_output(const RunConfig& cfg, const ZeroScheme& z) {
  check_format(cfg, true);
  CohomologyTable t = regions(z, chosen_box(cfg, z));
  if (cfg.format == "csv") return to_csv(t);
  if (cfg.format == "text") return z.space().k() == 2 ? render_staircase(t) : to_csv(t);
  return to_json(t).dump(2) + "\n";
}

std::string generators_output(const RunConfig& cfg, const ZeroScheme& z) {
  check_format(cfg, false);
  IdealCache cache(z);
  const Box box = chosen_box(cfg, z);
  GeneratorTable t = generator_table(cache, box);
  GeneratorStructureReport s = check_generator_structure(cache, box);
  auto list = [](const std::vector<MultiIndex>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& m : v) a.push_back(m.entries());
    return a;
  };
  if (cfg.format == "text") {
    std::ostringstream os;
    for (const auto& r : t.records)
      if (r.gens) os << r.a.str() << " " << r.gens << "\n";
    os << "total " << t.total() << "\n";
    return os.str();
  }
  nlohmann::json j = to_json(t);
  j["structure"] = {{"expected_total", s.expected_total},
                    {"actual_total", s.actual_total},
                    {"surjectivity_violations", list(s.surjectivity_violations)},
                    {"unexpected", list(s.unexpected)}};
  return j.dump(2) + "\n";
}

std::string report_output(const RunConfig& cfg, const VerificationReport& r) {
  check_format(cfg, false);
  if (cfg.format == "text") return to_text(r);
  return to_json(r).dump(2) + "\n";
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw std::invalid_argument("cannot write " + cfg.out);
  f << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohomology and generators of zero-dimensional schemes in multiprojective space"};
  app.name("mproj");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--modulus", cfg.modulus, "prime field modulus");
  app.add_option("--seed", cfg.seed, "base seed");
  app.add_option("--seeds", cfg.seeds, "number of seeds per campaign");
  app.add_option("--threads", cfg.threads, "worker threads (0: hardware)");
  app.add_option("--box", cfg.box, "upper corner of the degree box")->delimiter(',');
  app.add_option("--format", cfg.format, "json, csv or text");
  app.add_option("--out", cfg.out, "write the report to FILE");

  SchemeSource src;
  auto* reg = app.add_subcommand("regions", "h0/h1 table, I0/I1 and the maximal-rank verdict");
  add_scheme_options(reg, src);
  auto* gen = app.add_subcommand("generators", "minimal generator counts per degree");
  add_scheme_options(gen, src);

  auto* ver = app.add_subcommand("verify", "randomized verification campaigns");
  ver->require_subcommand(1);

  std::size_t k = 2, z = 0, s = 0, i = 1, instances = 50;
  int t = 0, alpha = 0;
  std::vector<int> space, y, r, xs, a;
  std::vector<std::size_t> s_list;
  ProbePlan plan;
  CorpusSpec corpus;

  auto* bb1 = ver->add_subcommand("bb1", "cokernel formula on (P1)^k");
  bb1->add_option("--k", k)->required();
  bb1->add_option("--z", z)->required();
  auto* p2p1 = ver->add_subcommand("p2p1", "cokernel formula with n_i in {1,2}");
  p2p1->add_option("--space", space)->delimiter(',')->required();
  p2p1->add_option("--z", z)->required();
  auto* bg2 = ver->add_subcommand("bg2", "points on R (x) Omega(x) over Y x P2");
  bg2->add_option("--y", y, "dimensions of Y")->delimiter(',');
  bg2->add_option("--r", r, "twist on Y")->delimiter(',');
  bg2->add_option("--alpha", alpha, "shortcut: Y = P1, R = O(alpha - 1)");
  bg2->add_option("--x", xs, "twists of Omega on P2")->delimiter(',')->required();
  auto* ee2 = ver->add_subcommand("ee2", "maximal rank through the kernel bundle");
  ee2->add_option("--space", space)->delimiter(',')->required();
  ee2->add_option("--i", i, "factor, 1-based")->required();
  ee2->add_option("--a", a)->delimiter(',')->required();
  ee2->add_option("--s", s_list)->delimiter(',');
  auto* pbg1 = ver->add_subcommand("pbg1", "surjectivity on Y x P2");
  pbg1->add_option("--y", y)->delimiter(',');
  pbg1->add_option("--r", r)->delimiter(',');
  pbg1->add_option("--t", t)->required();
  pbg1->add_option("--s", s_list)->delimiter(',');
  auto* f3 = ver->add_subcommand("f3", "Z is the base locus of |I_Z(a)|");
  f3->add_option("--space", space)->delimiter(',')->required();
  f3->add_option("--a", a)->delimiter(',')->required();
  f3->add_option("--s", s)->required();
  f3->add_option("--probes", plan.uniform);
  auto* f4 = ver->add_subcommand("f4", "Z is the base locus of |I_Z(a + e_i)|");
  f4->add_option("--space", space)->delimiter(',')->required();
  f4->add_option("--a", a)->delimiter(',')->required();
  f4->add_option("--s", s)->required();
  f4->add_option("--i", i, "factor, 1-based")->required();
  f4->add_option("--probes", plan.uniform);
  auto* p0 = ver->add_subcommand("prop0bg1", "h1 monotonicity and fiber stabilization on a random corpus");
  p0->add_option("--instances", instances);
  p0->add_option("--max-k", corpus.max_k);
  p0->add_option("--max-n", corpus.max_n);
  p0->add_option("--max-degree", corpus.max_degree);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto one_based = [](std::size_t v) {
    if (v == 0) throw std::out_of_range("factor indices start at 1");
    return v - 1;
  };

  try {
    if (reg->parsed()) {
      emit(cfg, regions_output(cfg, load_scheme(src, cfg)), out);
      return kExitPass;
    }
    if (gen->parsed()) {
      emit(cfg, generators_output(cfg, load_scheme(src, cfg)), out);
      return kExitPass;
    }

    const CampaignConfig c = cfg.campaign();
    std::optional<std::vector<std::size_t>> s_values;
    if (!s_list.empty()) s_values = s_list;
    VerificationReport rep;
    if (bb1->parsed()) {
      rep = verify_bb1(k, z, cfg.box_upper(), c);
    } else if (p2p1->parsed()) {
      rep = verify_p2p1(Space(space), z, cfg.box_upper(), c);
    } else if (bg2->parsed()) {
      if (alpha > 0) {
        y = {1};
        r = {alpha - 1};
      }
      rep = verify_bg2(y, r, xs, c);
    } else if (ee2->parsed()) {
      rep = verify_ee2(Space(space), one_based(i), MultiIndex(a), s_values, c);
    } else if (pbg1->parsed()) {
      rep = verify_pbg1(y, r, t, s_values, c);
    } else if (f3->parsed()) {
      rep = verify_f3(Space(space), s, MultiIndex(a), c, plan);
    } else if (f4->parsed()) {
      rep = verify_f4(Space(space), s, MultiIndex(a), one_based(i), c, plan);
    } else {
      rep = verify_prop0bg1(instances, c, corpus);
    }
    emit(cfg, report_output(cfg, rep), out);
    return rep.pass() ? kExitPass : kExitFail;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mproj
