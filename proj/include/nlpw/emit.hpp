#pragma once

#include <string>
#include <vector>

#include "nlpw/eigen.hpp"
#include "nlpw/hfun.hpp"
#include "nlpw/saturation.hpp"

namespace nlpw::cli {

enum class Format { json, csv };

class emit_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One gtrig evaluation row.
struct GtrigEval {
    double p = 0.0, q = 0.0, t = 0.0;
    double pi = 0.0, sin = 0.0, cos = 0.0;
};

/// H sweep row for the hfun command.
struct HRow {
    double m = 0.0, p = 0.0, q = 0.0, r = 0.0;
    double h = 0.0, error = 0.0;
    bool divergent = false;
};

/// EigenResult plus its symmetry diagnostics (the `lambda` command record).
struct LambdaRecord {
    eigen::EigenResult result;
    eigen::SymmetryDiagnostics diagnostics;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = true;
};

// All emitters produce deterministic bytes: fixed key order, CSV header
// rows, floating point with 17 significant digits, locale independent.
std::string emit(const GtrigEval& rec, Format format);
std::string emit(const std::vector<HRow>& rows, Format format);
std::string emit(const eigen::EigenResult& rec, Format format);
std::string emit(const LambdaRecord& rec, Format format);
std::string emit(const eigen::GridFunction& u, Format format);
std::string emit(const saturation::SaturationReport& rep, Format format);
std::string emit(const VerifyReport& rep, Format format);

/// 17-significant-digit, locale-independent rendering used by every
/// emitter ("nan"/"inf" for non-finite values in CSV, null in JSON).
std::string format_double(double v);

} // namespace nlpw::cli
