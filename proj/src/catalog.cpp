#include "frobken/catalog.hpp"

#include "frobken/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace frobken {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string catalog_key(const std::string& command, const json& request) {
    return fnv1a_hex(std::string(kEngineVersion) + "\n" + command + "\n" +
                     dump_canonical(request));
}

Catalog::Catalog(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string Catalog::path_for(const std::string& key) const {
    return (fs::path(dir_) / (key + ".json")).string();
}

void Catalog::store(const std::string& key, const std::string& command,
                    const json& result) const {
    const std::string body = dump_canonical(result);
    const std::string path = path_for(key);
    if (fs::exists(path)) {
        auto existing = lookup(key);
        if (!existing || dump_canonical(existing->result) != body) {
            throw EngineError("CatalogCorrupt",
                              "key " + key + " already holds a different result");
        }
        return;  // idempotent
    }
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));

    json entry;
    entry["key"] = key;
    entry["engine_version"] = kEngineVersion;
    entry["command"] = command;
    entry["timestamp"] = stamp;
    entry["content_hash"] = fnv1a_hex(body);
    entry["result"] = result;

    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw EngineError("CatalogCorrupt", "cannot write " + tmp);
        out << dump_canonical(entry);
    }
    fs::rename(tmp, path);  // atomic publish
}

std::optional<CatalogEntry> Catalog::lookup(const std::string& key) const {
    const std::string path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    json entry;
    try {
        in >> entry;
    } catch (const std::exception&) {
        throw EngineError("CatalogCorrupt", "unreadable catalog entry " + path);
    }
    CatalogEntry out;
    try {
        out.key = entry.at("key").get<std::string>();
        out.engine_version = entry.at("engine_version").get<std::string>();
        out.command = entry.at("command").get<std::string>();
        out.timestamp = entry.value("timestamp", std::string());
        out.result = entry.at("result");
        const std::string want = entry.at("content_hash").get<std::string>();
        if (fnv1a_hex(dump_canonical(out.result)) != want || out.key != key) {
            throw EngineError("CatalogCorrupt", "content hash mismatch in " + path);
        }
    } catch (const json::exception&) {
        throw EngineError("CatalogCorrupt", "malformed catalog entry " + path);
    }
    return out;
}

}  // namespace frobken
