#include "ava/core/store.hpp"

#include "ava/errors.hpp"

#include <fstream>

namespace ava {

namespace fs = std::filesystem;

ImageStore::ImageStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(*dir_);
}

std::string ImageStore::put(const Bytes& png) {
    auto hash = content_hash(png);
    std::lock_guard lock(mu_);
    if (cache_.contains(hash)) {
        return hash;
    }
    if (dir_) {
        const auto path = *dir_ / (hash + ".png");
        if (!fs::exists(path)) {
            write_file(path.string(), png);
        }
    }
    cache_.emplace(hash, png);
    return hash;
}

std::optional<Bytes> ImageStore::get(const std::string& hash) const {
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(hash); it != cache_.end()) {
            return it->second;
        }
    }
    if (!dir_) {
        return std::nullopt;
    }
    // Hashes are hex; anything else cannot name a stored file.
    if (hash.empty() || hash.find_first_not_of("0123456789abcdef") != std::string::npos) {
        return std::nullopt;
    }
    const auto path = *dir_ / (hash + ".png");
    if (!fs::exists(path)) {
        return std::nullopt;
    }
    return read_file(path.string());
}

bool ImageStore::contains(const std::string& hash) const {
    return get(hash).has_value();
}

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)), images_(dir_ / "images") {
    fs::create_directories(dir_);
}

fs::path SessionStore::path_for(const std::string& id) const {
    return dir_ / (id + ".json");
}

void SessionStore::save(const Session& session) {
    const auto text = serialize_session(session);
    std::lock_guard lock(mu_);
    const auto final_path = path_for(session.id);
    auto tmp = final_path;
    tmp += ".tmp";
    write_text_file(tmp.string(), text);
    fs::rename(tmp, final_path);
}

std::optional<Session> SessionStore::load(const std::string& id) const {
    const auto path = path_for(id);
    if (!fs::exists(path)) {
        return std::nullopt;
    }
    const auto bytes = read_file(path.string());
    return session_from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
}

std::vector<Session> SessionStore::load_all() const {
    std::vector<Session> out;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (entry.path().extension() != ".json") continue;
        try {
            const auto bytes = read_file(entry.path().string());
            out.push_back(session_from_json(nlohmann::json::parse(bytes.begin(), bytes.end())));
        } catch (const std::exception&) {
            // Skip files that are not session logs.
        }
    }
    std::sort(out.begin(), out.end(), [](const Session& a, const Session& b) { return a.id < b.id; });
    return out;
}

}  // namespace ava
