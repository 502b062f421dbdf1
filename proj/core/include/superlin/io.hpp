#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "superlin/types.hpp"

namespace superlin {

enum class Format { Json, Csv };

// Parses the JSON input schema:
//   {"articles": [{"id": "...",
//                  "experiments": [{"id": "...",
//                                   "n": 20 | [20, 20, 20],
//                                   "means": [r, r, r],
//                                   "sds": [r, r, r]}]}]}
// A scalar n expands to three equal cell sizes. Malformed JSON raises
// ParseError (position-annotated); schema and value violations raise
// ValidationError naming the article/experiment/field.
std::vector<ArticleDataset> parse_json(const std::string& text);

// Parses the CSV schema with exact header
//   article_id,experiment_id,n1,n2,n3,m1,m2,m3,s1,s2,s3
// Rows group into articles by article_id in order of first appearance.
// Structural problems (header, arity, unreadable numbers) raise ParseError
// with a line number; value violations raise ValidationError naming the
// line and field. Fields are comma-split verbatim; ids must not contain
// commas.
std::vector<ArticleDataset> parse_csv(const std::string& text);

// Reads the file and dispatches on format. File-not-readable raises
// ParseError.
std::vector<ArticleDataset> ingest(const std::filesystem::path& path,
                                   Format format);

// Serialize datasets back to the schemas above. Deterministic: fixed key
// order, numbers at 17 significant digits, no timestamps. Cell sizes are
// always written in the three-element form, so ingest(emit(d)) == d up to
// the scalar-n shorthand. emit_csv rejects ids containing commas, CR or LF.
std::string emit_json(const std::vector<ArticleDataset>& datasets);
std::string emit_csv(const std::vector<ArticleDataset>& datasets);

// Shared validation used by both parsers: duplicate experiment ids, sd > 0,
// cell sizes >= 2, nonempty articles, unique article ids.
void validate_dataset(const ArticleDataset& article);
void validate_datasets(const std::vector<ArticleDataset>& datasets);

// Formats one double with %.17g (round-trip exact).
std::string format_g17(double x);

}  // namespace superlin
