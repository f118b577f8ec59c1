#pragma once

#include "insp/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

// Report plumbing: tab-delimited tables with a header row, a flat
// key-value manifest, and write-then-rename so a failed run never leaves a
// truncated report behind.

namespace insp {

inline std::uint64_t fnv1a_hash(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

class TableWriter {
  public:
    explicit TableWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) body_ << '\t';
            body_ << columns_[i];
        }
        body_ << '\n';
    }

    TableWriter& cell(const std::string& v) {
        if (col_) body_ << '\t';
        body_ << v;
        ++col_;
        return *this;
    }
    TableWriter& cell(double v, int precision = 10) {
        std::ostringstream os;
        os << std::setprecision(precision) << v;
        return cell(os.str());
    }
    TableWriter& cell(long v) { return cell(std::to_string(v)); }
    TableWriter& cell(int v) { return cell(std::to_string(v)); }
    void end_row() {
        body_ << '\n';
        col_ = 0;
    }

    std::string str() const { return body_.str(); }

  private:
    std::vector<std::string> columns_;
    std::ostringstream body_;
    std::size_t col_ = 0;
};

class KeyValueWriter {
  public:
    KeyValueWriter& set(const std::string& key, const std::string& value) {
        body_ << key << " = " << value << '\n';
        return *this;
    }
    KeyValueWriter& set(const std::string& key, double value, int precision = 10) {
        std::ostringstream os;
        os << std::setprecision(precision) << value;
        return set(key, os.str());
    }
    KeyValueWriter& set(const std::string& key, long value) {
        return set(key, std::to_string(value));
    }
    KeyValueWriter& set(const std::string& key, int value) {
        return set(key, std::to_string(value));
    }
    std::string str() const { return body_.str(); }

  private:
    std::ostringstream body_;
};

} // namespace insp
