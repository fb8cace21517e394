#include "laebound/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace laeb {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string bound_report_text(const BoundReport& report) {
    std::string out;
    out += "# PAC-Bayes bound report\n";
    out += "# delta=" + format_double(report.delta) + " sigma=" + format_double(report.sigma) +
           " p=" + format_double(report.p) + " L=" + std::to_string(report.l) +
           " zero_diag=" + (report.zero_diag ? std::string("true") : std::string("false")) +
           " jitter=" + format_double(report.jitter_applied) + "\n";
    out += "lambda\temp_risk_exp\tkl\tlog_mgf\tln_L_over_delta\tLH\tRH\tmgf_is_upper_bound\trejected\n";
    for (const GridRecord& rec : report.grid) {
        out += format_double(rec.lambda);
        if (rec.rejected) {
            out += "\t-\t-\t-\t" + format_double(rec.ln_l_over_delta) + "\t-\t-\t-\t" +
                   *rec.rejected + "\n";
            continue;
        }
        out += "\t" + format_double(rec.emp_risk_exp);
        out += "\t" + format_double(rec.kl);
        out += "\t" + format_double(rec.log_mgf);
        out += "\t" + format_double(rec.ln_l_over_delta);
        out += "\t" + format_double(rec.lh);
        out += "\t" + format_double(rec.rh);
        out += rec.mgf_is_upper_bound ? "\ttrue" : "\tfalse";
        out += "\t-\n";
    }
    const GridRecord& best = report.grid[report.best_index];
    out += "# selected lambda=" + format_double(best.lambda) +
           " LH=" + format_double(best.lh) + " RH=" + format_double(best.rh) + "\n";
    return out;
}

std::string bound_report_json(const BoundReport& report) {
    nlohmann::ordered_json root;
    root["delta"] = report.delta;
    root["sigma"] = report.sigma;
    root["p"] = report.p;
    root["L"] = report.l;
    root["zero_diag"] = report.zero_diag;
    root["jitter_applied"] = report.jitter_applied;
    root["best_index"] = report.best_index;
    root["grid"] = nlohmann::ordered_json::array();
    for (const GridRecord& rec : report.grid) {
        nlohmann::ordered_json row;
        row["lambda"] = rec.lambda;
        if (rec.rejected) {
            row["ln_L_over_delta"] = rec.ln_l_over_delta;
            row["rejected"] = *rec.rejected;
        } else {
            row["emp_risk_exp"] = rec.emp_risk_exp;
            row["kl"] = rec.kl;
            row["log_mgf"] = rec.log_mgf;
            row["ln_L_over_delta"] = rec.ln_l_over_delta;
            row["LH"] = rec.lh;
            row["RH"] = rec.rh;
            row["mgf_is_upper_bound"] = rec.mgf_is_upper_bound;
        }
        root["grid"].push_back(std::move(row));
    }
    return root.dump(2) + "\n";
}

void write_bound_report(const std::filesystem::path& text_path,
                        const std::filesystem::path& json_path,
                        const BoundReport& report) {
    {
        std::ofstream out(text_path);
        if (!out) throw ArgumentError("cannot write report: " + text_path.string());
        out << bound_report_text(report);
    }
    {
        std::ofstream out(json_path);
        if (!out) throw ArgumentError("cannot write report: " + json_path.string());
        out << bound_report_json(report);
    }
}

}  // namespace laeb
