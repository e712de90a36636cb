// Content-addressed, write-once result catalog with atomic persistence.

#pragma once

#include "frobken/types.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace frobken {

inline constexpr const char* kEngineVersion = "frobken 1.0.0";

/// FNV-1a 64-bit hash rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Key of a result: engine version + command + canonical request document.
std::string catalog_key(const std::string& command, const nlohmann::json& request);

struct CatalogEntry {
    std::string key;
    std::string engine_version;
    std::string command;
    std::string timestamp;  // ISO 8601 UTC, informational only
    nlohmann::json result;
};

class Catalog {
public:
    explicit Catalog(std::string dir);

    /// Write-once store: a second store under the same key verifies that the
    /// result is byte-identical (CatalogCorrupt otherwise).
    void store(const std::string& key, const std::string& command,
               const nlohmann::json& result) const;

    /// Returns the cached result, or nullopt on miss. Verifies the stored
    /// content hash (CatalogCorrupt on mismatch).
    std::optional<CatalogEntry> lookup(const std::string& key) const;

    const std::string& dir() const { return dir_; }

private:
    std::string path_for(const std::string& key) const;
    std::string dir_;
};

}  // namespace frobken
