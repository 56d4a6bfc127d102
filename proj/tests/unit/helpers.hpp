#pragma once

#include "ava/params.hpp"

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

namespace testing {

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("ava-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline double num(const ava::ParamVector& p, const std::string& name) { return ava::number_of(p, name); }

}  // namespace testing
