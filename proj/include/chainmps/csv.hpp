// csv.hpp — Deterministic CSV emission (17 significant digits)

#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "chainmps/errors.hpp"

namespace chainmps::csv {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Writer {
  public:
    explicit Writer(const std::string& path) : out_(path) {
        if (!out_) throw Error("cannot open output file '" + path + "'");
    }

    void row(const std::string& line) { out_ << line << "\n"; }

    template <typename... Args>
    void fields(const Args&... args) {
        bool first = true;
        ((out_ << (first ? "" : ","), first = false, put(args)), ...);
        out_ << "\n";
    }

  private:
    void put(double v) { out_ << fmt(v); }
    void put(int v) { out_ << v; }
    void put(const std::string& s) { out_ << s; }
    void put(const char* s) { out_ << s; }

    std::ofstream out_;
};

} // namespace chainmps::csv
