#include "narlab/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace narlab {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

namespace {

void render(const nlohmann::ordered_json& v, std::string& out, int depth) {
    const std::string pad(2 * static_cast<size_t>(depth), ' ');
    const std::string pad_in(2 * static_cast<size_t>(depth + 1), ' ');
    switch (v.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + nlohmann::ordered_json(it.key()).dump() + ": ";
                render(it.value(), out, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                render(e, out, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::ordered_json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string render_json(const nlohmann::ordered_json& doc) {
    std::string out;
    render(doc, out, 0);
    out += "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace narlab
