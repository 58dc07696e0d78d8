// Command-line front end: key management, watermarked generation, detection,
// attribution, attack simulation and metric sweeps.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "personamark/attacks.hpp"
#include "personamark/detection.hpp"
#include "personamark/evaluation.hpp"
#include "personamark/injection.hpp"

#ifndef PM_DEFAULT_DATA_DIR
#define PM_DEFAULT_DATA_DIR "data"
#endif

namespace pm = personamark;
using nlohmann::json;

namespace {

constexpr const char* kArtifactVersion = "personamark 1.0.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// flat key=value config; flags win over file values
std::unordered_map<std::string, std::string> load_config(int argc, char** argv) {
  std::string path;
  if (const char* env = std::getenv("PERSONAMARK_CONFIG")) path = env;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") path = argv[i + 1];
  std::unordered_map<std::string, std::string> cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return cfg;
}

struct Toolchain {
  pm::Lexicon lexicon;
  pm::LabelInventory inventory;
  pm::Tagger tagger;
  pm::StructureExtractor extractor;

  Toolchain(const std::string& lexicon_path, const std::string& labels_path)
      : lexicon(pm::Lexicon::load(lexicon_path)),
        inventory(pm::LabelInventory::load(labels_path)),
        tagger(lexicon),
        extractor(tagger, inventory) {}
};

json report_json(const pm::DetectionReport& rep) {
  return json{{"user", rep.user},
              {"n", rep.n},
              {"ones", rep.ones},
              {"p_hat", rep.p_hat},
              {"z", rep.z},
              {"p_value", rep.p_value},
              {"detected", rep.detected},
              {"skipped_short", rep.skipped_short}};
}

void emit_report(const json& j, const std::string& report_path) {
  if (report_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_file(report_path, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  std::unordered_map<std::string, std::string> file_cfg;
  try {
    file_cfg = load_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto cfg_or = [&](const std::string& key, const std::string& fallback) {
    auto it = file_cfg.find(key);
    return it == file_cfg.end() ? fallback : it->second;
  };

  const std::string data_dir = cfg_or("data_dir", PM_DEFAULT_DATA_DIR);

  CLI::App app{"PersonaMark: user-attributable sentence-structure text watermarking"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file");
  bool show_version = false;
  app.add_flag("--version", show_version, "print artifact/extractor/inventory versions");

  std::string lexicon_path = cfg_or("lexicon", data_dir + "/lexicon.tsv");
  std::string labels_path = cfg_or("labels", data_dir + "/dep_labels.txt");
  std::string db_path = cfg_or("db", "keys.db");
  std::string delimiters = cfg_or("delimiters", std::string(pm::kDefaultDelimiters));
  app.add_option("--lexicon", lexicon_path, "POS lexicon TSV");
  app.add_option("--labels", labels_path, "dependency label inventory");
  app.add_option("--db", db_path, "key database path");
  app.add_option("--delimiters", delimiters, "sentence-ending characters");
  bool split_commas = false;
  app.add_flag("--split-commas", split_commas, "also treat ',' as a sentence ender");

  pm::GeneratorConfig gen_cfg;
  gen_cfg.num_beams = std::stoi(cfg_or("num_beams", "24"));
  gen_cfg.num_beam_groups = std::stoi(cfg_or("num_beam_groups", "12"));
  gen_cfg.diversity_penalty = std::stod(cfg_or("diversity_penalty", "1.5"));
  gen_cfg.repetition_penalty = std::stod(cfg_or("repetition_penalty", "1.1"));
  gen_cfg.length_penalty = std::stod(cfg_or("length_penalty", "0.7"));
  gen_cfg.top_k = std::stoi(cfg_or("top_k", "50"));
  gen_cfg.top_p = std::stod(cfg_or("top_p", "0.95"));
  gen_cfg.fallback_temperature = std::stod(cfg_or("temperature", "2.0"));
  gen_cfg.min_words = std::stoi(cfg_or("min_words", "6"));
  gen_cfg.max_words = std::stoi(cfg_or("max_words", "40"));

  pm::InjectionConfig inj_cfg;
  inj_cfg.sent_num = std::stoi(cfg_or("sent_num", "16"));
  inj_cfg.structural_threshold = std::stoi(cfg_or("structural_threshold", "5"));
  inj_cfg.max_retries = std::stoi(cfg_or("max_retries", "4"));

  pm::DetectorConfig det_cfg;
  det_cfg.z_threshold = std::stod(cfg_or("z_threshold", "4"));
  det_cfg.structural_threshold = inj_cfg.structural_threshold;

  std::uint64_t seed = std::stoull(cfg_or("seed", "0"));

  // ---- keygen ----
  auto* keygen = app.add_subcommand("keygen", "register a user key");
  std::string kg_user;
  bool kg_seeded = false, paper_compat = false;
  keygen->add_option("user", kg_user, "user id")->required();
  keygen->add_option("--seed", seed, "deterministic salt seed");
  keygen->add_flag("--paper-compat", paper_compat, "zero salt (user-ID-only hashing)");

  // ---- generate ----
  auto* generate = app.add_subcommand("generate", "produce watermarked text");
  std::string g_user, g_prompt_file, g_out, corpus_path = cfg_or("corpus", data_dir + "/corpus.txt");
  int model_order = std::stoi(cfg_or("order", "3"));
  generate->add_option("user", g_user, "user id")->required();
  generate->add_option("--prompt-file", g_prompt_file, "prompt text file")->required();
  generate->add_option("--out", g_out, "output text file")->required();
  generate->add_option("--corpus", corpus_path, "generator corpus");
  generate->add_option("--order", model_order, "n-gram order");
  generate->add_option("--sent-num", inj_cfg.sent_num, "sentences to emit");
  generate->add_option("--seed", seed, "rng seed");
  generate->add_option("--num-beams", gen_cfg.num_beams);
  generate->add_option("--num-beam-groups", gen_cfg.num_beam_groups);
  generate->add_option("--diversity-penalty", gen_cfg.diversity_penalty);
  generate->add_option("--repetition-penalty", gen_cfg.repetition_penalty);
  generate->add_option("--length-penalty", gen_cfg.length_penalty);
  generate->add_option("--top-k", gen_cfg.top_k);
  generate->add_option("--top-p", gen_cfg.top_p);
  generate->add_option("--temperature", gen_cfg.fallback_temperature,
                       "fallback resampling temperature");
  generate->add_option("--max-retries", inj_cfg.max_retries);

  // ---- detect ----
  auto* detect = app.add_subcommand("detect", "single-user watermark test");
  std::string d_user, d_in, d_report;
  detect->add_option("user", d_user, "user id")->required();
  detect->add_option("--in", d_in, "text file to test")->required();
  detect->add_option("--report", d_report, "write JSON report here");
  detect->add_option("--z-threshold", det_cfg.z_threshold);
  detect->add_option("--structural-threshold", det_cfg.structural_threshold);

  // ---- attribute ----
  auto* attrib = app.add_subcommand("attribute", "scan the key database");
  std::string a_in, a_report, bench_counts;
  bool bonferroni = false, timing = false;
  attrib->add_option("--in", a_in, "text file to test")->required();
  attrib->add_option("--report", a_report, "write JSON report here");
  attrib->add_option("--z-threshold", det_cfg.z_threshold);
  attrib->add_flag("--bonferroni", bonferroni, "raise threshold to alpha/|db|");
  attrib->add_flag("--timing", timing, "include wall-clock time in the report");
  attrib->add_option("--bench", bench_counts,
                     "comma-separated synthetic user counts; prints a timing table");

  // ---- attack ----
  auto* attack = app.add_subcommand("attack", "synonym-substitution perturbation");
  std::string t_in, t_out, t_log, thesaurus_path = cfg_or("thesaurus", data_dir + "/thesaurus.tsv");
  double rate = std::stod(cfg_or("rate", "0.25"));
  attack->add_option("--in", t_in)->required();
  attack->add_option("--out", t_out)->required();
  attack->add_option("--thesaurus", thesaurus_path);
  attack->add_option("--rate", rate, "per-word replacement probability (max 0.4)");
  attack->add_option("--seed", seed);
  attack->add_option("--log", t_log, "replacement log file");

  // ---- eval ----
  auto* eval = app.add_subcommand("eval", "text / detector metrics");
  auto* ev_read = eval->add_subcommand("readability", "Flesch reading ease");
  std::string ev_in;
  ev_read->add_option("--in", ev_in)->required();
  auto* ev_auc = eval->add_subcommand("auc", "ROC-AUC over score,label CSV");
  std::string ev_scores, ev_roc_out;
  ev_auc->add_option("--scores", ev_scores, "CSV: score,label per line")->required();
  ev_auc->add_option("--roc-csv", ev_roc_out, "write fpr,tpr curve here");
  auto* ev_bal = eval->add_subcommand("balance", "pooled bit-1 proportion");
  std::string ev_user;
  std::vector<std::string> ev_texts;
  ev_bal->add_option("user", ev_user)->required();
  ev_bal->add_option("texts", ev_texts, "text files")->required();

  CLI11_PARSE(app, argc, argv);

  if (split_commas) delimiters += ',';
  inj_cfg.delimiters = delimiters;
  gen_cfg.delimiters = delimiters;

  try {
    if (show_version) {
      std::string inventory_version = "unavailable";
      try {
        inventory_version = pm::LabelInventory::load(labels_path).version();
      } catch (const std::exception&) {
      }
      std::cout << kArtifactVersion << "\nextractor " << pm::kExtractorVersion
                << "\ninventory " << inventory_version << "\nsyllables "
                << pm::kSyllableHeuristicVersion << "\n";
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }

    if (keygen->parsed()) {
      pm::KeyDatabase db;
      std::ifstream probe(db_path);
      if (probe.good()) db = pm::KeyDatabase::load(db_path);
      std::optional<std::uint64_t> s;
      if (keygen->count("--seed")) s = seed;
      db.register_user(kg_user, s, paper_compat);
      db.save(db_path);
      return 0;
    }

    if (generate->parsed()) {
      Toolchain tc(lexicon_path, labels_path);
      pm::KeyDatabase db = pm::KeyDatabase::load(db_path);
      const pm::KeyRecord* rec = db.find(g_user);
      if (!rec) throw std::runtime_error("unknown user: " + g_user);
      const pm::NGramModel model = pm::NGramModel::build(corpus_path, model_order);
      const pm::NGramGenerator generator(model);
      const std::string prompt = read_file(g_prompt_file);
      pm::InjectionResult result =
          pm::inject(*rec, prompt, generator, tc.extractor, inj_cfg, gen_cfg, seed);
      write_file(g_out, result.text + "\n");
      write_file(g_out + ".trace.jsonl", result.trace.to_jsonl());
      return 0;
    }

    if (detect->parsed()) {
      Toolchain tc(lexicon_path, labels_path);
      pm::KeyDatabase db = pm::KeyDatabase::load(db_path);
      const pm::KeyRecord* rec = db.find(d_user);
      if (!rec) throw std::runtime_error("unknown user: " + d_user);
      pm::DetectionReport rep =
          pm::detect_single(*rec, read_file(d_in), tc.extractor, det_cfg, delimiters);
      json j = report_json(rep);
      j["extractor_version"] = pm::kExtractorVersion;
      j["inventory_version"] = tc.inventory.version();
      j["delimiters"] = delimiters;
      emit_report(j, d_report);
      return rep.detected ? 0 : 1;
    }

    if (attrib->parsed()) {
      Toolchain tc(lexicon_path, labels_path);
      det_cfg.bonferroni = bonferroni;
      const std::string text = read_file(a_in);

      if (!bench_counts.empty()) {
        std::cout << "users\truntime_seconds\n";
        std::stringstream ss(bench_counts);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const long count = std::stol(item);
          pm::KeyDatabase db;
          for (long i = 0; i < count; ++i)
            db.register_user("bench-user-" + std::to_string(i),
                             static_cast<std::uint64_t>(i) + 1);
          pm::AttributionResult r =
              pm::attribute(db, text, tc.extractor, det_cfg, delimiters);
          std::cout << count << '\t' << r.elapsed_seconds << '\n';
        }
        return 0;
      }

      pm::KeyDatabase db = pm::KeyDatabase::load(db_path);
      pm::AttributionResult result =
          pm::attribute(db, text, tc.extractor, det_cfg, delimiters);
      json j;
      j["best_user"] = result.best_user ? json(*result.best_user) : json(nullptr);
      j["best_z"] = result.best_z;
      j["ambiguous"] = result.ambiguous;
      j["candidates"] = result.candidates;
      j["elapsed"] = timing ? result.elapsed_seconds : 0.0;
      j["extractor_version"] = pm::kExtractorVersion;
      j["inventory_version"] = tc.inventory.version();
      j["delimiters"] = delimiters;
      json reports = json::array();
      for (const pm::DetectionReport& rep : result.reports)
        reports.push_back(report_json(rep));
      j["reports"] = std::move(reports);
      emit_report(j, a_report);
      return result.best_user ? 0 : 1;
    }

    if (attack->parsed()) {
      if (rate > pm::kMaxAttackRate) {
        std::cerr << "error: rate exceeds cap 0.4\n";
        return 2;
      }
      Toolchain tc(lexicon_path, labels_path);
      const pm::Thesaurus th = pm::Thesaurus::load(thesaurus_path);
      pm::AttackConfig acfg;
      acfg.rate = rate;
      acfg.rng_seed = seed;
      pm::AttackResult result = pm::synonym_attack(read_file(t_in), th, acfg, tc.tagger);
      write_file(t_out, result.text);
      if (!t_log.empty()) {
        std::string log;
        for (const auto& [from, to] : result.replacements)
          log += from + "\t" + to + "\n";
        write_file(t_log, log);
      }
      std::cout << "replaced " << result.replaced_count << " words\n";
      return 0;
    }

    if (ev_read->parsed()) {
      pm::ReadabilityScore score = pm::flesch(read_file(ev_in), delimiters);
      json j = {{"re", score.re}, {"wl", score.wl}, {"sl", score.sl}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (ev_auc->parsed()) {
      std::vector<pm::ScoredExample> examples;
      std::istringstream in(read_file(ev_scores));
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0])) &&
                                line[0] != '-' && line[0] != '+')
          continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        examples.push_back({std::stod(line.substr(0, comma)),
                            std::stoi(line.substr(comma + 1)) != 0});
      }
      std::cout << "auc," << pm::roc_auc(examples) << "\n";
      if (!ev_roc_out.empty()) write_file(ev_roc_out, pm::roc_csv(examples));
      return 0;
    }
    if (ev_bal->parsed()) {
      Toolchain tc(lexicon_path, labels_path);
      pm::KeyDatabase db = pm::KeyDatabase::load(db_path);
      const pm::KeyRecord* rec = db.find(ev_user);
      if (!rec) throw std::runtime_error("unknown user: " + ev_user);
      std::vector<std::string> texts;
      for (const std::string& path : ev_texts) texts.push_back(read_file(path));
      std::cout << "balance," << pm::bit_balance(*rec, texts, tc.extractor, delimiters,
                                                 det_cfg.structural_threshold)
                << "\n";
      return 0;
    }
    if (eval->parsed()) {
      std::cerr << eval->help();
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
