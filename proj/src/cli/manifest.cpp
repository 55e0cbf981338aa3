#include "gazeaes/cli/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#ifndef GAZEAES_VERSION
#define GAZEAES_VERSION "0.0.0"
#endif

namespace gazeaes::cli {

namespace {

namespace fs = std::filesystem;

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("SHA-256 initialisation failed");
        }
    }
    void update(const char* data, std::size_t n) {
        if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw std::runtime_error("SHA-256 update failed");
    }
    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) throw std::runtime_error("SHA-256 final failed");
        static constexpr char kHex[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out += kHex[md[i] >> 4];
            out += kHex[md[i] & 0xF];
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string tool_version() { return GAZEAES_VERSION; }

std::string sha256_bytes(const std::string& bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    Sha256 h;
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        h.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

std::string sha256_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), dir));
    }
    std::sort(files.begin(), files.end());
    std::string listing;
    for (const auto& f : files) {
        listing += f.generic_string();
        listing += '\0';
        listing += sha256_file(dir / f);
        listing += '\n';
    }
    return sha256_bytes(listing);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config_path"] = config_path ? nlohmann::ordered_json(config_path->string()) : nlohmann::ordered_json(nullptr);
    j["seed"] = seed;
    j["options"] = options;
    auto inputs_json = nlohmann::ordered_json::array();
    for (const auto& in : inputs) {
        inputs_json.push_back({{"role", in.role}, {"path", in.path.string()}, {"sha256", in.sha256}});
    }
    j["inputs"] = inputs_json;
    j["output_dir"] = output_dir.string();
    j["tool_version"] = tool_version;
    j["data_dir_variable"] = kDataDirVariable;
    j["data_dir"] = data_dir ? nlohmann::ordered_json(*data_dir) : nlohmann::ordered_json(nullptr);
    j["dry_run"] = dry_run;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    if (!j.at("config_path").is_null()) m.config_path = j.at("config_path").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.options = j.at("options").get<std::map<std::string, std::string>>();
    for (const auto& in : j.at("inputs")) {
        m.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>(),
                            in.at("sha256").get<std::string>()});
    }
    m.output_dir = j.at("output_dir").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    if (!j.at("data_dir").is_null()) m.data_dir = j.at("data_dir").get<std::string>();
    m.dry_run = j.at("dry_run").get<bool>();
    return m;
}

void prepare_output_dir(const fs::path& dir, bool force) {
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) throw OutputDirError(dir.string() + " exists and is not a directory");
        const bool has_manifest = fs::exists(dir / kManifestFile);
        const bool non_empty = fs::directory_iterator(dir) != fs::directory_iterator();
        if (!force && has_manifest) {
            throw OutputDirError(dir.string() + " already holds a run (manifest.json); use --force to overwrite");
        }
        if (!force && non_empty) throw OutputDirError(dir.string() + " is not empty; use --force to write into it");
        if (has_manifest) fs::remove(dir / kManifestFile);
    }
    fs::create_directories(dir);
}

void write_manifest(const RunManifest& manifest) {
    const auto path = manifest.output_dir / kManifestFile;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << manifest.to_json();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace gazeaes::cli
