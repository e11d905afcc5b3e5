#pragma once

// Command-line front end: ingest, search, rank, show, backup, radar.
//
// Exit codes: 0 success, 1 data problem (broken catalog, unknown id), 2 bad usage
// (unparseable flags, unknown vocabulary, invalid filter, weight out of range).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppmlrank/api.hpp"
#include "ppmlrank/codec.hpp"

namespace ppmlrank::cli {

enum ExitCode { kOk = 0, kDataError = 1, kUsageError = 2 };

/// Query and filter flags; collected as query-string pairs so the CLI and the
/// service decode them through the same path.
struct QueryFlags {
  std::string technique;
  std::vector<std::string> ml_models;
  std::vector<std::string> threat_models;
  std::vector<std::string> datasets;
  std::string training_status;
  std::string open_source;
  std::vector<std::string> acceleration;
  std::vector<std::string> schemes;
  std::vector<std::string> libraries;
  std::vector<std::string> tech;

  void attach(CLI::App* cmd) {
    cmd->add_option("--technique", technique, "FL, DP, TEE, MPC, HE or Hybrid");
    cmd->add_option("--ml-model", ml_models, "ML model (repeatable, any-of)");
    cmd->add_option("--threat-model", threat_models, "malicious, semi-honest or semi-honest-ttp (repeatable)");
    cmd->add_option("--dataset", datasets, "Dataset (repeatable, any-of)");
    cmd->add_option("--training-status", training_status, "inference-only, training-only or both");
    cmd->add_option("--open-source", open_source, "true or false");
    cmd->add_option("--acceleration", acceleration, "GPU, FPGA or ASIC (repeatable)");
    cmd->add_option("--scheme", schemes, "Scheme or protocol (repeatable)");
    cmd->add_option("--library", libraries, "Library (repeatable)");
    cmd->add_option("--tech", tech, "Technique-specific filter key=value, e.g. bootstrapping=true (repeatable)");
  }

  /// Throws ParseError.
  Selection selection() const {
    QueryParams p;
    auto one = [&](const char* key, const std::string& v) {
      if (!v.empty()) p.emplace_back(key, v);
    };
    auto many = [&](const char* key, const std::vector<std::string>& vs) {
      for (const auto& v : vs) p.emplace_back(key, v);
    };
    one("technique", technique);
    many("ml_model", ml_models);
    many("threat_model", threat_models);
    many("dataset", datasets);
    one("training_status", training_status);
    one("open_source", open_source);
    many("acceleration", acceleration);
    many("scheme", schemes);
    many("library", libraries);
    for (const auto& kv : tech) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("--tech expects key=value, got '" + kv + "'");
      p.emplace_back(std::string(kTechParamPrefix) + kv.substr(0, eq), kv.substr(eq + 1));
    }
    return parse_query_params(p);
  }
};

namespace detail {

inline std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

inline constexpr int kPointWidth = 11;

inline std::string points_text(const FactorVector& p, int digits = 3) {
  std::ostringstream ss;
  for (double v : p.values()) ss << std::left << std::setw(kPointWidth) << fixed(v, digits);
  return ss.str();
}

inline std::string points_header() {
  static constexpr const char* names[] = {"threat", "privacy", "published", "verifiable", "open", "training"};
  std::ostringstream ss;
  for (const char* n : names) ss << std::left << std::setw(kPointWidth) << n;
  return ss.str();
}

inline std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out.empty() ? "-" : out;
}

inline void print_results(std::ostream& out, const char* title, const std::vector<ResultEntry>& entries) {
  out << title << ":\n";
  if (entries.empty()) {
    out << "  (none)\n";
    return;
  }
  for (const auto& e : entries) {
    out << "  " << e.dataset << "  " << e.model << "  accuracy " << fixed(e.accuracy, 4);
    if (e.inference_time) out << "  time " << *e.inference_time << "s";
    if (e.memory) out << "  memory " << *e.memory;
    if (e.communication) out << "  communication " << *e.communication;
    out << "\n";
  }
}

}  // namespace detail

inline int cmd_ingest(const std::filesystem::path& dir, std::ostream& out) {
  const auto scan = scan_catalog_dir(dir);
  for (const auto& issue : scan.issues) {
    for (const auto& m : issue.messages) out << issue.file << ": " << m << "\n";
  }
  out << scan.records.size() << " records OK";
  if (!scan.clean()) out << ", " << scan.issues.size() << " files rejected";
  out << "\n";
  return scan.clean() ? kOk : kDataError;
}

inline int cmd_search(const Catalog& catalog, const Selection& s, bool json, std::ostream& out) {
  const auto found = select_frameworks(catalog, s.query, s.filters);
  if (json) {
    out << framework_list_json(catalog, found).dump(2) << "\n";
    return kOk;
  }
  const auto ctx = ScoringContext::of(catalog);
  out << std::left << std::setw(16) << "id" << std::setw(8) << "tech" << detail::points_header() << "\n";
  for (const auto& r : found) {
    out << std::left << std::setw(16) << r.id << std::setw(8) << to_string(r.technique)
        << detail::points_text(factor_vector(r, ctx)) << "\n";
  }
  out << found.size() << " frameworks\n";
  return kOk;
}

inline int cmd_rank(const Catalog& catalog, const RankRequest& req, std::size_t top, bool json, std::ostream& out) {
  auto list = evaluate(catalog, req);
  if (top > 0 && list.entries.size() > top) list.entries.resize(top);
  if (json) {
    out << ranked_list_document(list);
    return kOk;
  }
  out << std::left << std::setw(4) << "#" << std::setw(16) << "id" << std::setw(10) << "score"
      << detail::points_header() << "\n";
  std::size_t n = 0;
  for (const auto& e : list.entries) {
    out << std::left << std::setw(4) << ++n << std::setw(16) << e.id << std::setw(10) << detail::fixed(e.score, 4)
        << detail::points_text(e.points) << "\n";
  }
  out << "weights: " << detail::points_text(FactorVector(list.weights_used.values()), 1) << "\n";
  return kOk;
}

inline int cmd_show(const Catalog& catalog, const std::string& id, bool json, std::ostream& out, std::ostream& err) {
  const auto* r = catalog.find(id);
  if (r == nullptr) {
    err << "error: unknown framework id '" << id << "'\n";
    return kDataError;
  }
  if (json) {
    out << framework_detail_json(catalog, *r).dump(2) << "\n";
    return kOk;
  }
  std::vector<std::string> threats;
  for (auto t : r->threat_models) threats.emplace_back(to_string(t));
  out << r->name << " (" << r->id << ")\n";
  out << "technique: " << to_string(r->technique) << "\n";
  if (!r->authors.empty()) out << "authors: " << detail::joined(r->authors) << "\n";
  if (!r->abstract.empty()) out << "abstract: " << r->abstract << "\n";
  out << "threat models: " << detail::joined(threats) << "\n";
  out << "data privacy: " << (r->data_privacy ? "yes" : "no") << "  model privacy: " << (r->model_privacy ? "yes" : "no")
      << "\n";
  out << "training support: " << to_string(r->training_support) << "\n";
  out << "open source: " << (r->open_source ? "yes" : "no") << "  verified: " << (r->verified ? "yes" : "no") << "\n";
  out << "ml models: " << detail::joined(r->ml_models) << "\n";
  out << "datasets: " << detail::joined(r->datasets) << "\n";
  out << "points:  " << detail::points_header() << "\n";
  out << "         " << detail::points_text(factor_vector(*r, catalog)) << "\n";
  detail::print_results(out, "published results", entries_of(*r, ResultSource::Published));
  detail::print_results(out, "verified results", entries_of(*r, ResultSource::Verified));
  if (r->verification_notes) out << "verification notes: " << *r->verification_notes << "\n";
  if (!r->links.empty()) out << "links: " << detail::joined(r->links) << "\n";
  return kOk;
}

inline int cmd_backup(const Catalog& catalog, std::vector<std::string> ids, bool all, const std::filesystem::path& dir,
                      std::ostream& out, std::ostream& err) {
  if (all) {
    ids.clear();
    for (const auto& r : catalog.records()) ids.push_back(r.id);
  }
  for (const auto& id : ids) {
    if (!catalog.contains(id)) {
      err << "error: unknown framework id '" << id << "'\n";
      return kDataError;
    }
  }
  std::filesystem::create_directories(dir);
  for (const auto& id : ids) out << write_backup(catalog, id, dir).string() << "\n";
  return kOk;
}

/// Tab-separated: a header row of axis labels, then one row of six points per framework.
inline std::string radar_report(const Catalog& catalog, const std::vector<std::string>& ids) {
  const auto ctx = ScoringContext::of(catalog);
  std::ostringstream ss;
  ss << "framework";
  for (auto f : kFactorKinds) ss << '\t' << factor_label(f);
  ss << '\n';
  for (const auto& id : ids) {
    const auto fv = factor_vector(catalog.at(id), ctx);
    ss << id;
    for (double v : fv.values()) ss << '\t' << detail::fixed(v, 6);
    ss << '\n';
  }
  return ss.str();
}

inline int cmd_radar(const Catalog& catalog, const std::vector<std::string>& ids, const std::string& path,
                     std::ostream& out, std::ostream& err) {
  for (const auto& id : ids) {
    if (!catalog.contains(id)) {
      err << "error: unknown framework id '" << id << "'\n";
      return kDataError;
    }
  }
  const auto report = radar_report(catalog, ids);
  if (path.empty() || path == "-") {
    out << report;
  } else {
    write_file_atomic(path, report);
  }
  return kOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Search and rank privacy-preserving ML frameworks"};
  app.require_subcommand(1);
  std::string catalog_dir;
  std::string format = "table";
  app.add_option("--catalog", catalog_dir, "Catalog directory")->envname("PPMLRANK_CATALOG");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json"}))->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Validate a catalog directory");
  std::string ingest_path;
  ingest->add_option("path", ingest_path, "Directory (default: --catalog)");

  QueryFlags search_flags;
  auto* search_cmd = app.add_subcommand("search", "List frameworks matching a query");
  search_flags.attach(search_cmd);

  QueryFlags rank_flags;
  std::vector<int> weights;
  std::size_t top = 0;
  auto* rank_cmd = app.add_subcommand("rank", "Rank frameworks matching a query");
  rank_flags.attach(rank_cmd);
  rank_cmd
      ->add_option("--weights", weights,
                   "Six integers 0..10 in factor order: threat, privacy, published, verifiable, open-source, "
                   "training (default 5 each)")
      ->delimiter(',')
      ->expected(6);
  rank_cmd->add_option("--top", top, "Show only the first N (0 = all)");

  std::string show_id;
  auto* show = app.add_subcommand("show", "Show one framework");
  show->add_option("id", show_id, "Framework id")->required();

  std::vector<std::string> backup_ids;
  bool backup_all = false;
  std::string backup_out;
  auto* backup = app.add_subcommand("backup", "Write backup documents");
  auto* ids_opt = backup->add_option("ids", backup_ids, "Framework ids");
  auto* all_flag = backup->add_flag("--all", backup_all, "Every framework in the catalog");
  ids_opt->excludes(all_flag);
  backup->add_option("--out", backup_out, "Output directory")->required();

  std::vector<std::string> radar_ids;
  std::string radar_out;
  auto* radar = app.add_subcommand("radar", "Write per-factor points for a radar chart (TSV)");
  radar->add_option("ids", radar_ids, "Framework ids")->required();
  radar->add_option("--out", radar_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  const bool json = format == "json";

  try {
    if (ingest->parsed()) {
      const std::string dir = ingest_path.empty() ? catalog_dir : ingest_path;
      if (dir.empty()) {
        err << "error: no catalog directory given\n";
        return kUsageError;
      }
      return cmd_ingest(dir, out);
    }
    if (backup->parsed() && !backup_all && backup_ids.empty()) {
      err << "error: give framework ids or --all\n";
      return kUsageError;
    }
    if (catalog_dir.empty()) {
      err << "error: --catalog is required\n";
      return kUsageError;
    }

    Catalog catalog;
    try {
      catalog = load_catalog(catalog_dir);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kDataError;
    }

    if (search_cmd->parsed()) return cmd_search(catalog, search_flags.selection(), json, out);
    if (rank_cmd->parsed()) {
      const auto s = rank_flags.selection();
      RankRequest req{s.query, s.filters, std::nullopt};
      if (!weights.empty()) {
        std::array<int, kFactorCount> w{};
        std::copy(weights.begin(), weights.end(), w.begin());
        req.ui_weights = w;
      }
      return cmd_rank(catalog, req, top, json, out);
    }
    if (show->parsed()) return cmd_show(catalog, show_id, json, out, err);
    if (backup->parsed()) return cmd_backup(catalog, backup_ids, backup_all, backup_out, out, err);
    if (radar->parsed()) return cmd_radar(catalog, radar_ids, radar_out, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UnknownVocabularyError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const InvalidFilterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const OutOfRangeError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace ppmlrank::cli
