#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "encal/errors.hpp"

namespace encal {

// Minimal RFC-4180-style CSV writer with a fixed numeric format so repeated
// runs produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot open output file " + path);
    }

    void comment(const std::string& text) { out_ << text << "\n"; }

    void raw_row(const std::string& line) { out_ << line << "\n"; }

    void begin_row() { first_ = true; }
    void field(const std::string& s) {
        sep();
        out_ << s;
    }
    void field(double v) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out_ << buf;
    }
    void field(long v) {
        sep();
        out_ << v;
    }
    void end_row() { out_ << "\n"; }

private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }

    std::ofstream out_;
    bool first_ = true;
};

}  // namespace encal
