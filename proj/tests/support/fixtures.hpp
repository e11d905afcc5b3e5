#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>

#include "ppmlrank/codec.hpp"

#ifndef PPMLRANK_FIXTURE_DIR
#error "PPMLRANK_FIXTURE_DIR must point at data/fixtures"
#endif

namespace ppmlrank::testing {

inline std::filesystem::path fixture_dir() { return PPMLRANK_FIXTURE_DIR; }

inline Catalog fixture_catalog() { return load_catalog(fixture_dir()); }

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ppmlrank-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  void write(const std::string& name, const std::string& content) const { write_file_atomic(path_ / name, content); }

 private:
  std::filesystem::path path_;
};

inline void copy_fixtures_to(const std::filesystem::path& dir) {
  for (const auto& f : record_files(fixture_dir())) {
    std::filesystem::copy_file(f, dir / f.filename());
  }
}

}  // namespace ppmlrank::testing
