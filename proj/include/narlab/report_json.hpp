#ifndef NARLAB_REPORT_JSON_HPP
#define NARLAB_REPORT_JSON_HPP

#include <string>

#include "json.hpp"

namespace narlab {

// Fixed %.12e float formatting so identical reports are byte-identical.
std::string format_double(double v);

// Deterministic pretty-printer for reports: insertion-ordered keys, 2-space
// indent, every float rendered with format_double.
std::string render_json(const nlohmann::ordered_json& doc);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace narlab

#endif
