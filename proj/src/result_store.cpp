#include "cellhom/result_store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cellhom {

namespace fs = std::filesystem;

ResultStore::ResultStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

std::string ResultStore::hash_key(const std::string& key) {
    // FNV-1a, 64 bit.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (4 * i)) & 0xf);
    return os.str();
}

std::string ResultStore::full_key(const std::string& command,
                                  const std::string& config_slice) const {
    return std::string(kCodeVersion) + "\n" + command + "\n" + config_slice;
}

fs::path ResultStore::entry_dir(const std::string& command,
                                const std::string& config_slice) {
    const std::string key = full_key(command, config_slice);
    const fs::path dir = root_ / hash_key(key);
    fs::create_directories(dir);
    const fs::path key_file = dir / "key.txt";
    if (fs::exists(key_file)) {
        std::ifstream f(key_file, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        if (os.str() != key)
            throw std::runtime_error("result store hash collision at " + dir.string());
    } else {
        std::ofstream f(key_file, std::ios::binary);
        f << key;
    }
    return dir;
}

std::optional<fs::path> ResultStore::lookup(const std::string& command,
                                            const std::string& config_slice) const {
    const std::string key = full_key(command, config_slice);
    const fs::path dir = root_ / hash_key(key);
    if (!fs::exists(dir / "DONE")) return std::nullopt;
    std::ifstream f(dir / "key.txt", std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    if (os.str() != key)
        throw std::runtime_error("result store hash collision at " + dir.string());
    return dir;
}

void ResultStore::mark_done(const fs::path& dir) {
    std::ofstream f(dir / "DONE", std::ios::binary);
    f << "ok\n";
}

void ResultStore::record_label(const fs::path& dir, const std::string& label) {
    const fs::path index = root_ / "index.txt";
    std::ofstream f(index, std::ios::binary | std::ios::app);
    f << dir.filename().string() << "  " << label << "\n";
}

}  // namespace cellhom
