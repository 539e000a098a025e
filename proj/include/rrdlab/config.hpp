#pragma once

// Run configuration, the sphere cache and atomic artifact writes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "rrdlab/spheres.hpp"
#include "rrdlab/version.hpp"

namespace rrdlab {

enum class OutputFormat { json, csv };

struct RunConfig {
  int q = 2;
  int max_length = 4;
  int registry_radius = 0;  // 0: derived from max_length and depth
  int depth = 4;
  double u_threshold = 8.0;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  int compression_max_n = 4;
  int lamplighter_radius = 10;
  int threads = 1;
  std::string output;
  OutputFormat format = OutputFormat::json;
  std::string cache_dir;

  /// Throws invalid_argument on any inconsistent setting.
  void validate() const {
    auto bad = [](const std::string& m) { throw Error(Errc::invalid_argument, m); };
    if (q < 2 || q > 256) bad("q must be a prime power <= 256");
    (void)Field::get(q);
    if (max_length < 0 || max_length % 2 != 0) bad("max length must be even and >= 0");
    if (depth < 0) bad("depth must be >= 0");
    if (registry_radius < 0) bad("registry radius must be >= 0");
    if (registry_radius > 0 && registry_radius < effective_registry_radius(false)) bad("registry radius too small for max length and depth");
    if (!(u_threshold > 0)) bad("U threshold must be positive");
    if (!(tolerance > 0)) bad("tolerance must be positive");
    if (max_iterations < 1) bad("max iterations must be >= 1");
    if (compression_max_n < 0) bad("compression max n must be >= 0");
    if (lamplighter_radius < 0) bad("lamplighter radius must be >= 0");
    if (threads < 1) bad("threads must be >= 1");
  }

  int effective_registry_radius(bool honor_override = true) const {
    if (honor_override && registry_radius > 0) return registry_radius;
    return std::max({max_length, depth + std::min(max_length, compression_max_n), 1});
  }

  /// Flag > RRDLAB_CACHE_DIR > ./.rrdlab-cache
  std::string resolved_cache_dir() const {
    if (!cache_dir.empty()) return cache_dir;
    if (const char* env = std::getenv("RRDLAB_CACHE_DIR"); env && *env) return env;
    return ".rrdlab-cache";
  }

  /// Result-affecting settings only: thread count and output path never change an artifact.
  nlohmann::json to_json() const {
    return {{"q", q},
            {"max_length", max_length},
            {"registry_radius", effective_registry_radius()},
            {"depth", depth},
            {"u_threshold", u_threshold},
            {"tolerance", tolerance},
            {"max_iterations", max_iterations},
            {"compression_max_n", compression_max_n},
            {"lamplighter_radius", lamplighter_radius},
            {"format", format == OutputFormat::json ? "json" : "csv"}};
  }
};

/// Writes through a temporary file in the target directory and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::invalid_argument, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(Errc::invalid_argument, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::filesystem::path sphere_cache_path(const std::string& dir, int q, int max_length) {
  return std::filesystem::path(dir) / ("spheres-q" + std::to_string(q) + "-N" + std::to_string(max_length) + "-v" + std::to_string(version_major) + ".json");
}

struct CachedTable {
  SphereTable table;
  bool reused = false;
  std::string path;
};

/// Loads the (q, N) table from the cache when it is current; stale or unreadable caches are
/// rebuilt and overwritten.
inline CachedTable load_or_build_spheres(const RunConfig& cfg, std::ostream& log = std::cerr) {
  const auto path = sphere_cache_path(cfg.resolved_cache_dir(), cfg.q, cfg.max_length);
  if (std::filesystem::exists(path)) {
    try {
      std::ifstream in(path, std::ios::binary);
      auto t = SphereTable::from_json(nlohmann::json::parse(in));
      if (t.q() != cfg.q || t.max_length() != cfg.max_length || t.provenance() != Provenance::certified_window)
        throw Error(Errc::stale_cache, "cache key mismatch");
      return {std::move(t), true, path.string()};
    } catch (const std::exception& e) {
      log << "rrdlab: rejecting sphere cache " << path.string() << ": " << e.what() << "\n";
    }
  }
  auto t = enumerate_ball(cfg.q, cfg.max_length, cfg.threads);
  write_atomic(path, t.to_json().dump() + "\n");
  return {std::move(t), false, path.string()};
}

}  // namespace rrdlab
