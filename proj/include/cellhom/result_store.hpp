#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace cellhom {

// Version tag baked into cache keys; bump on any change that affects outputs.
inline constexpr const char* kCodeVersion = "cellhom-1";

// Content-addressed result directory.  Each (command, config slice) pair maps
// to one subdirectory; a completed entry carries a DONE marker and re-running
// the same experiment is a cache hit.  The full key is stored alongside the
// artifacts and compared on lookup, so a hash collision is an error rather
// than a silent mixup.
class ResultStore {
public:
    explicit ResultStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    static std::string hash_key(const std::string& key);

    // Directory for the entry, created if needed; throws on hash collision.
    std::filesystem::path entry_dir(const std::string& command,
                                    const std::string& config_slice);

    // Completed entry, if one exists with a matching key.
    std::optional<std::filesystem::path> lookup(const std::string& command,
                                                const std::string& config_slice) const;

    void mark_done(const std::filesystem::path& dir);
    // Human label recorded in the index file.
    void record_label(const std::filesystem::path& dir, const std::string& label);

private:
    std::string full_key(const std::string& command,
                         const std::string& config_slice) const;

    std::filesystem::path root_;
};

}  // namespace cellhom
