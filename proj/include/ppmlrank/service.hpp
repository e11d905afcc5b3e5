#pragma once

// Transport-free request handling for the HTTP API. The catalog directory holds the
// accepted record documents; pending and reviewed submissions live in their own
// directory. Readers work on the snapshot current at request start; review is the
// only writer.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ppmlrank/api.hpp"
#include "ppmlrank/codec.hpp"

namespace ppmlrank {

struct HttpRequest {
  std::string method;
  std::string path;
  QueryParams params;
  std::string body;
  /// Header names in lower case.
  std::map<std::string, std::string> headers;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

inline constexpr std::string_view kReviewerTokenHeader = "x-reviewer-token";

enum class SubmissionStatus { Pending, Approved, Rejected };

namespace detail {
inline constexpr NameTable<SubmissionStatus, 3> kSubmissionStatusNames{{
    {SubmissionStatus::Pending, "pending"},
    {SubmissionStatus::Approved, "approved"},
    {SubmissionStatus::Rejected, "rejected"},
}};
}  // namespace detail

constexpr std::string_view to_string(SubmissionStatus s) { return detail::name_of(detail::kSubmissionStatusNames, s); }
template <>
inline std::optional<SubmissionStatus> parse_enum<SubmissionStatus>(std::string_view text) {
  return detail::parse_name(detail::kSubmissionStatusNames, text);
}

struct Submission {
  std::string id;
  FrameworkRecord record;
  SubmissionStatus status = SubmissionStatus::Pending;
  std::string submitted_at;
  std::optional<std::string> reviewer_note;
};

inline Json submission_to_json(const Submission& s) {
  Json j;
  j["id"] = s.id;
  j["status"] = std::string(to_string(s.status));
  j["submitted_at"] = s.submitted_at;
  j["reviewer_note"] = s.reviewer_note ? Json(*s.reviewer_note) : Json(nullptr);
  j["record"] = record_to_json(s.record);
  return j;
}

inline Submission submission_from_json(const Json& j) {
  detail::ObjectReader in(j, "");
  Submission s;
  s.id = in.string("id", true);
  s.status = in.enumeration<SubmissionStatus>("status");
  s.submitted_at = in.string("submitted_at", true);
  s.reviewer_note = in.optional_string("reviewer_note");
  s.record = record_from_json(in.require("record"));
  in.finish();
  return s;
}

struct ServiceConfig {
  std::filesystem::path catalog_dir;
  std::filesystem::path submissions_dir;
  /// Review requests must present this value; review is disabled when empty.
  std::string reviewer_token;
};

class Service {
 public:
  /// Loads the catalog directory (version 1) and any stored submissions.
  explicit Service(ServiceConfig config) : config_(std::move(config)) {
    std::filesystem::create_directories(config_.catalog_dir);
    std::filesystem::create_directories(config_.submissions_dir);
    snapshot_ = std::make_shared<const Catalog>(load_catalog(config_.catalog_dir));
    for (const auto& path : record_files(config_.submissions_dir)) {
      auto sub = submission_from_json(Json::parse(read_file(path)));
      next_submission_ = std::max(next_submission_, sequence_of(sub.id) + 1);
      submissions_.emplace(sub.id, std::move(sub));
    }
  }

  std::shared_ptr<const Catalog> snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
  }

  std::optional<Submission> submission(const std::string& id) const {
    std::lock_guard lock(write_mutex_);
    auto it = submissions_.find(id);
    if (it == submissions_.end()) return std::nullopt;
    return it->second;
  }

  HttpResponse handle(const HttpRequest& req) {
    try {
      return route(req);
    } catch (const std::exception& e) {
      return error(500, "internal", e.what());
    }
  }

 private:
  static std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
      auto end = path.find('/', start);
      if (end == std::string_view::npos) end = path.size();
      if (end > start) parts.emplace_back(path.substr(start, end - start));
      start = end + 1;
    }
    return parts;
  }

  static HttpResponse json_response(int status, const Json& body) {
    HttpResponse r;
    r.status = status;
    r.body = body.dump(2) + "\n";
    return r;
  }

  static HttpResponse error(int status, std::string_view code, std::string_view message,
                            const std::vector<std::string>& violations = {}) {
    Json j;
    j["error"] = std::string(code);
    j["detail"] = std::string(message);
    j["violations"] = detail::string_array(violations);
    return json_response(status, j);
  }

  static HttpResponse method_not_allowed() { return error(405, "method_not_allowed", "method not allowed"); }

  HttpResponse route(const HttpRequest& req) {
    const auto parts = split_path(req.path);
    if (parts.size() < 2 || parts[0] != "api") return error(404, "not_found", "no such endpoint");
    const std::string& area = parts[1];
    if (area == "frameworks") {
      if (req.method != "GET") return method_not_allowed();
      if (parts.size() == 2) return list_frameworks(req);
      if (parts.size() == 3) return framework_detail(parts[2]);
      if (parts.size() == 4 && parts[3] == "backup") return framework_backup(parts[2]);
    } else if (area == "rank" && parts.size() == 2) {
      if (req.method != "POST") return method_not_allowed();
      return rank_frameworks(req);
    } else if (area == "meta" && parts.size() == 2) {
      if (req.method != "GET") return method_not_allowed();
      return json_response(200, meta_json(*snapshot()));
    } else if (area == "submissions") {
      if (parts.size() == 2) return req.method == "POST" ? submit(req) : method_not_allowed();
      if (parts.size() == 4 && parts[3] == "review") {
        return req.method == "POST" ? review(parts[2], req) : method_not_allowed();
      }
    }
    return error(404, "not_found", "no such endpoint");
  }

  HttpResponse list_frameworks(const HttpRequest& req) const {
    QueryParams params;
    std::size_t limit = std::numeric_limits<std::size_t>::max();
    std::size_t offset = 0;
    try {
      for (const auto& [key, value] : req.params) {
        if (key == "limit") {
          limit = parse_size(key, value);
        } else if (key == "offset") {
          offset = parse_size(key, value);
        } else {
          params.emplace_back(key, value);
        }
      }
      const auto selection = parse_query_params(params);
      const auto catalog = snapshot();
      const auto found = select_frameworks(*catalog, selection.query, selection.filters);
      const auto j = framework_list_json(*catalog, found, offset, limit);
      return json_response(200, j);
    } catch (const ParseError& e) {
      return error(400, "bad_request", e.what());
    } catch (const UnknownVocabularyError& e) {
      return error(400, "unknown_vocabulary", e.what());
    } catch (const InvalidFilterError& e) {
      return error(400, "invalid_filter", e.what());
    }
  }

  static std::size_t parse_size(const std::string& key, const std::string& value) {
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ParseError("parameter '" + key + "' expects a non-negative integer");
    }
    return n;
  }

  HttpResponse rank_frameworks(const HttpRequest& req) const {
    RankRequest request;
    try {
      request = parse_rank_request(req.body);
    } catch (const ParseError& e) {
      return error(422, "malformed_body", e.what());
    }
    try {
      HttpResponse r;
      r.body = ranked_list_document(evaluate(*snapshot(), request));
      return r;
    } catch (const OutOfRangeError& e) {
      return error(400, "out_of_range", e.what());
    } catch (const UnknownVocabularyError& e) {
      return error(400, "unknown_vocabulary", e.what());
    } catch (const InvalidFilterError& e) {
      return error(400, "invalid_filter", e.what());
    }
  }

  HttpResponse framework_detail(const std::string& id) const {
    const auto catalog = snapshot();
    const auto* r = catalog->find(id);
    if (r == nullptr) return error(404, "not_found", "unknown framework id '" + id + "'");
    return json_response(200, framework_detail_json(*catalog, *r));
  }

  HttpResponse framework_backup(const std::string& id) const {
    const auto catalog = snapshot();
    if (!catalog->contains(id)) return error(404, "not_found", "unknown framework id '" + id + "'");
    HttpResponse r;
    r.body = export_backup(*catalog, id);
    r.headers["Content-Disposition"] = "attachment; filename=\"" + backup_filename(id) + "\"";
    return r;
  }

  HttpResponse submit(const HttpRequest& req) {
    FrameworkRecord record;
    try {
      record = ingest_record(req.body);
    } catch (const ParseError& e) {
      return error(422, "malformed_body", e.what());
    } catch (const ValidationError& e) {
      return error(422, "validation_failed", e.what(), e.violations());
    }
    std::lock_guard lock(write_mutex_);
    if (snapshot()->contains(record.id)) {
      return error(409, "duplicate_id", "framework id '" + record.id + "' is already in the catalog");
    }
    Submission sub;
    sub.id = submission_id(next_submission_);
    sub.record = std::move(record);
    sub.submitted_at = now_utc();
    persist(sub);
    ++next_submission_;
    auto body = submission_to_json(sub);
    submissions_.emplace(sub.id, std::move(sub));
    return json_response(201, body);
  }

  HttpResponse review(const std::string& id, const HttpRequest& req) {
    auto token = req.headers.find(std::string(kReviewerTokenHeader));
    if (config_.reviewer_token.empty() || token == req.headers.end() || token->second != config_.reviewer_token) {
      return error(401, "unauthorized", "missing or wrong reviewer token");
    }
    bool approve = false;
    std::optional<std::string> note;
    try {
      Json j;
      try {
        j = Json::parse(req.body);
      } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
      }
      detail::ObjectReader in(j, "");
      const auto decision = in.string("decision", true);
      if (decision != "approve" && decision != "reject") {
        detail::ObjectReader::fail("decision", "expected approve or reject");
      }
      approve = decision == "approve";
      note = in.optional_string("note");
      in.finish();
    } catch (const ParseError& e) {
      return error(422, "malformed_body", e.what());
    }

    std::lock_guard lock(write_mutex_);
    auto it = submissions_.find(id);
    if (it == submissions_.end()) return error(404, "not_found", "unknown submission '" + id + "'");
    Submission updated = it->second;
    if (updated.status != SubmissionStatus::Pending) {
      return error(409, "conflict", "submission '" + id + "' is already " + std::string(to_string(updated.status)));
    }
    updated.reviewer_note = note;
    if (!approve) {
      updated.status = SubmissionStatus::Rejected;
      persist(updated);
      it->second = updated;
      return json_response(200, submission_to_json(updated));
    }

    const auto current = snapshot();
    if (current->contains(updated.record.id)) {
      return error(409, "duplicate_id", "framework id '" + updated.record.id + "' is already in the catalog");
    }
    auto next = std::make_shared<const Catalog>(current->with_record(updated.record));
    // The backup document is written before the new snapshot becomes visible.
    write_backup(*next, updated.record.id, config_.catalog_dir);
    updated.status = SubmissionStatus::Approved;
    persist(updated);
    it->second = updated;
    {
      std::lock_guard swap(snapshot_mutex_);
      snapshot_ = std::move(next);
    }
    return json_response(200, submission_to_json(updated));
  }

  void persist(const Submission& s) const {
    write_file_atomic(config_.submissions_dir / (s.id + ".json"), submission_to_json(s).dump(2) + "\n");
  }

  static std::string submission_id(std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sub-%06llu", static_cast<unsigned long long>(n));
    return buf;
  }

  static std::uint64_t sequence_of(const std::string& id) {
    std::uint64_t n = 0;
    if (id.size() > 4 && id.starts_with("sub-")) std::from_chars(id.data() + 4, id.data() + id.size(), n);
    return n;
  }

  static std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  ServiceConfig config_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Catalog> snapshot_;
  mutable std::mutex write_mutex_;
  std::map<std::string, Submission> submissions_;
  std::uint64_t next_submission_ = 1;
};

}  // namespace ppmlrank
