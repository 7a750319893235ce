#include "nlpw/emit.hpp"

#include <charconv>
#include <cmath>

namespace nlpw::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

// Minimal ordered JSON writer; the vendor parser is used for reading only,
// since byte-stable output needs explicit key order and float formatting.
class Json {
  public:
    Json& begin() { return raw("{"), *this; }
    Json& end() { return raw("}"), *this; }
    Json& key(const std::string& k) {
        comma();
        out_ += '"';
        out_ += k;
        out_ += "\":";
        fresh_ = true;
        return *this;
    }
    Json& value(double v) {
        if (!std::isfinite(v)) return raw("null");
        return raw(format_double(v));
    }
    Json& value(bool v) { return raw(v ? "true" : "false"); }
    Json& value(int v) { return raw(std::to_string(v)); }
    Json& value(const std::string& s) {
        std::string esc = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        esc += '"';
        return raw(esc);
    }
    Json& begin_array() { return raw("["), *this; }
    Json& sep() { return raw(","), *this; }
    Json& end_array() { return raw("]"), *this; }
    Json& null() { return raw("null"); }
    const std::string& str() const { return out_; }

    Json& raw(const std::string& s) {
        out_ += s;
        fresh_ = false;
        return *this;
    }

  private:
    void comma() {
        if (!out_.empty() && out_.back() != '{' && out_.back() != '[' && !fresh_) out_ += ',';
    }
    std::string out_;
    bool fresh_ = false;
};

void json_diagnostics(Json& j, const eigen::SymmetryDiagnostics& d) {
    j.begin();
    j.key("even_defect").value(d.even_defect);
    j.key("odd_defect").value(d.odd_defect);
    j.key("r_average").value(d.r_average);
    j.key("zero_count").value(d.zero_count);
    j.key("min_location").value(d.min_location);
    j.key("max_location").value(d.max_location);
    j.end();
}

void json_result_fields(Json& j, const eigen::EigenResult& r) {
    j.key("lambda").value(r.lambda);
    j.key("gamma").value(r.gamma);
    j.key("grad_norm").value(r.grad_norm);
    j.key("start_label").value(r.start_label);
    j.key("iterations").value(r.iterations);
}

[[noreturn]] void unsupported(const char* what) {
    throw emit_error(std::string("emit: unsupported format for ") + what);
}

} // namespace

std::string emit(const GtrigEval& rec, Format format) {
    if (format == Format::csv) {
        std::string s = "p,q,t,pi_pq,sin_pq,cos_pq\n";
        s += format_double(rec.p) + "," + format_double(rec.q) + "," + format_double(rec.t) +
             "," + format_double(rec.pi) + "," + format_double(rec.sin) + "," +
             format_double(rec.cos) + "\n";
        return s;
    }
    Json j;
    j.begin();
    j.key("p").value(rec.p);
    j.key("q").value(rec.q);
    j.key("t").value(rec.t);
    j.key("pi_pq").value(rec.pi);
    j.key("sin_pq").value(rec.sin);
    j.key("cos_pq").value(rec.cos);
    j.end();
    return j.str() + "\n";
}

std::string emit(const std::vector<HRow>& rows, Format format) {
    if (format == Format::csv) {
        std::string s = "m,p,q,r,H,error,divergent\n";
        for (const auto& row : rows) {
            s += format_double(row.m) + "," + format_double(row.p) + "," +
                 format_double(row.q) + "," + format_double(row.r) + "," +
                 format_double(row.h) + "," + format_double(row.error) + "," +
                 (row.divergent ? "1" : "0") + "\n";
        }
        return s;
    }
    Json j;
    j.begin_array();
    bool first = true;
    for (const auto& row : rows) {
        if (!first) j.sep();
        first = false;
        j.begin();
        j.key("m").value(row.m);
        j.key("p").value(row.p);
        j.key("q").value(row.q);
        j.key("r").value(row.r);
        j.key("H").value(row.h);
        j.key("error").value(row.error);
        j.key("divergent").value(row.divergent);
        j.end();
    }
    j.end_array();
    return j.str() + "\n";
}

std::string emit(const eigen::EigenResult& rec, Format format) {
    if (format != Format::json) unsupported("EigenResult");
    Json j;
    j.begin();
    json_result_fields(j, rec);
    j.end();
    return j.str() + "\n";
}

std::string emit(const LambdaRecord& rec, Format format) {
    if (format != Format::json) unsupported("LambdaRecord");
    Json j;
    j.begin();
    json_result_fields(j, rec.result);
    j.key("diagnostics");
    json_diagnostics(j, rec.diagnostics);
    j.end();
    return j.str() + "\n";
}

std::string emit(const eigen::GridFunction& u, Format format) {
    if (format != Format::csv) unsupported("GridFunction");
    std::string s = "x,u\n";
    for (int i = 0; i <= u.n; ++i) {
        s += format_double(u.node(i)) + "," + format_double(u.at_node(i)) + "\n";
    }
    return s;
}

std::string emit(const saturation::SaturationReport& rep, Format format) {
    if (format == Format::csv) {
        std::string s = "alpha,lambda,even_defect,odd_defect,r_average,zero_count\n";
        for (const auto& sm : rep.samples) {
            s += format_double(sm.alpha) + "," + format_double(sm.lambda) + "," +
                 format_double(sm.diagnostics.even_defect) + "," +
                 format_double(sm.diagnostics.odd_defect) + "," +
                 format_double(sm.diagnostics.r_average) + "," +
                 std::to_string(sm.diagnostics.zero_count) + "\n";
        }
        return s;
    }
    Json j;
    j.begin();
    j.key("params").begin();
    j.key("p").value(rep.params.p);
    j.key("q").value(rep.params.q);
    j.key("r").value(rep.params.r);
    j.key("p_conj").value(rep.params.p_conj);
    j.key("in_theorem_range").value(rep.params.in_theorem_range);
    j.end();
    j.key("alpha_grid").begin_array();
    for (size_t i = 0; i < rep.alpha_grid.size(); ++i) {
        if (i) j.sep();
        j.value(rep.alpha_grid[i]);
    }
    j.end_array();
    j.key("lambda_samples").begin_array();
    for (size_t i = 0; i < rep.lambda_samples.size(); ++i) {
        if (i) j.sep();
        j.value(rep.lambda_samples[i]);
    }
    j.end_array();
    j.key("alpha_c").value(rep.alpha_c);
    j.key("alpha_c_bracket").begin_array();
    j.value(rep.alpha_c_bracket.first).sep().value(rep.alpha_c_bracket.second);
    j.end_array();
    j.key("lower_bound").value(rep.lower_bound);
    j.key("closed_form");
    if (rep.closed_form) {
        j.value(*rep.closed_form);
    } else {
        j.null();
    }
    j.key("monotone_ok").value(rep.monotone_ok);
    j.key("lipschitz_ok").value(rep.lipschitz_ok);
    j.key("samples").begin_array();
    for (size_t i = 0; i < rep.samples.size(); ++i) {
        if (i) j.sep();
        const auto& sm = rep.samples[i];
        j.begin();
        j.key("alpha").value(sm.alpha);
        j.key("lambda").value(sm.lambda);
        j.key("solver_converged").value(sm.solver_converged);
        j.key("diagnostics");
        json_diagnostics(j, sm.diagnostics);
        j.end();
    }
    j.end_array();
    j.end();
    return j.str() + "\n";
}

std::string emit(const VerifyReport& rep, Format format) {
    if (format == Format::csv) {
        std::string s = "name,pass,residual,threshold,detail\n";
        for (const auto& c : rep.checks) {
            std::string detail = c.detail;
            for (char& ch : detail) {
                if (ch == ',') ch = ';';
            }
            s += c.name + "," + (c.pass ? "1" : "0") + "," + format_double(c.residual) + "," +
                 format_double(c.threshold) + "," + detail + "\n";
        }
        return s;
    }
    Json j;
    j.begin();
    j.key("all_pass").value(rep.all_pass);
    j.key("checks").begin_array();
    for (size_t i = 0; i < rep.checks.size(); ++i) {
        if (i) j.sep();
        const auto& c = rep.checks[i];
        j.begin();
        j.key("name").value(c.name);
        j.key("pass").value(c.pass);
        j.key("residual").value(c.residual);
        j.key("threshold").value(c.threshold);
        j.key("detail").value(c.detail);
        j.end();
    }
    j.end_array();
    j.end();
    return j.str() + "\n";
}

} // namespace nlpw::cli
