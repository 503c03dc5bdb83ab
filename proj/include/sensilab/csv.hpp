// CSV emission.  Every numeric field prints with %.17g so identical
// configurations produce byte-identical files.

#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensilab/spectral.hpp"

namespace sensilab::csv {

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string num(int v) { return std::to_string(v); }

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
    }

    void header(std::initializer_list<const char*> cols) {
        bool first = true;
        for (const char* c : cols) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline void write_signal(const std::string& path, const spectral::TraceSignal& sig) {
    Writer w(path);
    w.header({"x", "re", "im"});
    for (std::size_t i = 0; i < sig.x_samples.size(); ++i)
        w.row({num(sig.x_samples[i]), num(sig.values[i].real()), num(sig.values[i].imag())});
}

inline void write_spectrum(const std::string& path, const spectral::Spectrum& spec) {
    Writer w(path);
    w.header({"xi", "log10_mod", "phase"});
    for (int i = 0; i < spec.grid.n_samples; ++i) {
        const auto& v = spec.values[static_cast<std::size_t>(i)];
        w.row({num(spec.grid.node(i)), num(v.log10_mod()), num(v.phase)});
    }
}

}  // namespace sensilab::csv
