#pragma once

#include <iosfwd>
#include <string>

#include "ccp/sample_record.hpp"

namespace ccp {

/// Parses a sample record from text: one numeric value per line, with an
/// optional leading header line of the form `# sample_rate=<value>`.
/// Blank lines are ignored. Throws std::runtime_error naming the line
/// number and content of the first malformed line, or on empty input.
SampleRecord ingest_csv(std::istream& in);
SampleRecord ingest_csv_text(const std::string& text);
SampleRecord ingest_csv_file(const std::string& path);

/// Inverse of ingest_csv. Values are printed with 17 significant digits so
/// a round trip reproduces the record exactly.
void emit_csv(const SampleRecord& record, std::ostream& out);
std::string emit_csv_text(const SampleRecord& record);

}  // namespace ccp
