#ifndef LRVLAB_IO_HPP
#define LRVLAB_IO_HPP

#include "lrvlab/diffseq.hpp"
#include "lrvlab/estimators.hpp"
#include "lrvlab/inference.hpp"
#include "lrvlab/rcp.hpp"
#include "lrvlab/selection.hpp"
#include "lrvlab/simlab.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lrvlab {

inline constexpr std::string_view kSchema = "lrvlab/1";

struct CsvData {
    std::vector<std::string> header;  // empty when the first record is numeric
    TimeSeries series;
};

/// RFC 4180 reader. The first record is a header when any of its fields is
/// neither numeric nor a missing-value token. Missing values (empty, NA,
/// NaN, null, ...) and non-numeric cells throw DomainError naming the
/// 1-based record and column.
CsvData read_csv(std::istream& in, std::string_view source = "<input>");
/// "-" reads standard input.
CsvData read_csv_file(const std::string& path);

/// Numbers printed with %.17g so that re-reading reproduces every bit.
void write_csv(std::ostream& out, const TimeSeries& x, const std::vector<std::string>& header = {});
std::string format_double(double v);
/// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

/// JSON or TOML (chosen by extension; anything but .toml is read as JSON).
nlohmann::json load_config(const std::filesystem::path& path);
nlohmann::json parse_toml(std::string_view text, std::string_view source = "<toml>");

/// {"schema": "lrvlab/1", "kind": kind} merged with the payload's fields.
nlohmann::json document(std::string_view kind, nlohmann::json payload);

void to_json(nlohmann::json& j, const DifferenceSequence& d);
void to_json(nlohmann::json& j, const EstimatorConfig& c);
void to_json(nlohmann::json& j, const LrvResult& r);
void to_json(nlohmann::json& j, const DetectedJump& d);
void to_json(nlohmann::json& j, const SegmentFit& s);
void to_json(nlohmann::json& j, const RcpReport& r);
void to_json(nlohmann::json& j, const PilotEstimates& p);
void to_json(nlohmann::json& j, const SuggestedResult& r);
void to_json(nlohmann::json& j, const TestResult& r);
void to_json(nlohmann::json& j, const TrendBand& b);
void to_json(nlohmann::json& j, const MseTable& t);
void to_json(nlohmann::json& j, const PowerTable& t);
void to_json(nlohmann::json& j, const CoverageRow& r);

/// Long-format experiment tables (one observation per row).
void write_csv(std::ostream& out, const MseTable& t);
void write_csv(std::ostream& out, const PowerTable& t);
void write_csv(std::ostream& out, const std::vector<CoverageRow>& rows);
void write_csv(std::ostream& out, const TrendBand& b);

} // namespace lrvlab

#endif
