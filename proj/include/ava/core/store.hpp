#pragma once

#include "ava/core/session.hpp"
#include "ava/image.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ava {

// Content-addressed PNG store. Memory-only when constructed without a directory;
// otherwise every image is also written once as <dir>/<hash>.png.
class ImageStore {
public:
    ImageStore() = default;
    explicit ImageStore(std::filesystem::path dir);

    std::string put(const Bytes& png);
    std::optional<Bytes> get(const std::string& hash) const;
    bool contains(const std::string& hash) const;
    const std::optional<std::filesystem::path>& dir() const noexcept { return dir_; }

private:
    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mu_;
    std::map<std::string, Bytes> cache_;
};

// One JSON file per session (<dir>/<id>.json) with images under <dir>/images/.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path dir);

    ImageStore& images() noexcept { return images_; }
    std::filesystem::path path_for(const std::string& id) const;

    // Replaces the stored file atomically; appends for one id are serialized.
    void save(const Session& session);
    std::optional<Session> load(const std::string& id) const;
    std::vector<Session> load_all() const;

private:
    std::filesystem::path dir_;
    ImageStore images_;
    mutable std::mutex mu_;
};

}  // namespace ava
