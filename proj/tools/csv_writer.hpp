#pragma once

// Small CSV emitter for the command-line tools. Every file starts with
// comment lines carrying the tool version and the config hash so outputs
// are traceable; numbers use 17 significant digits to round-trip exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgsim::cli {

inline constexpr const char* kToolVersion = "0.1.0";

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& command,
              std::uint64_t config_hash, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
        char hash[32];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(config_hash));
        out_ << "# sgsim " << kToolVersion << "\n";
        out_ << "# config-hash " << hash << "\n";
        out_ << "# command " << command << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out_ << (first ? "" : ",") << buf;
            first = false;
        }
        out_ << "\n";
    }

    void raw_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

  private:
    std::ofstream out_;
};

}  // namespace sgsim::cli
