#include "ccp/csv_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccp {

namespace {

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

double parse_value(const std::string& line, std::size_t line_no) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(line, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 " is not numeric: \"" + line + "\"");
    }
    while (pos < line.size() &&
           std::isspace(static_cast<unsigned char>(line[pos]))) {
        ++pos;
    }
    if (pos != line.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 " has trailing content: \"" + line + "\"");
    }
    return value;
}

}  // namespace

SampleRecord ingest_csv(std::istream& in) {
    SampleRecord record;
    std::string line;
    std::size_t line_no = 0;
    bool saw_content = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;

        if (line[0] == '#') {
            const std::string key = "sample_rate=";
            auto at = line.find(key);
            if (at != std::string::npos) {
                if (saw_content) {
                    throw std::runtime_error(
                        "line " + std::to_string(line_no) +
                        ": sample_rate header must precede data");
                }
                record.sample_rate = parse_value(line.substr(at + key.size()), line_no);
            }
            continue;  // other comment lines are ignored
        }

        record.samples.push_back(parse_value(line, line_no));
        saw_content = true;
    }

    if (record.samples.empty()) {
        throw std::runtime_error("input contains no samples");
    }
    validate(record);
    return record;
}

SampleRecord ingest_csv_text(const std::string& text) {
    std::istringstream in(text);
    return ingest_csv(in);
}

SampleRecord ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return ingest_csv(in);
}

void emit_csv(const SampleRecord& record, std::ostream& out) {
    char buf[64];
    if (record.sample_rate) {
        std::snprintf(buf, sizeof(buf), "%.17g", *record.sample_rate);
        out << "# sample_rate=" << buf << "\n";
    }
    for (double v : record.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << "\n";
    }
}

std::string emit_csv_text(const SampleRecord& record) {
    std::ostringstream out;
    emit_csv(record, out);
    return out.str();
}

}  // namespace ccp
