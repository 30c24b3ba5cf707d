#include "queasylab/report.hpp"

#include "json.hpp"

namespace queasylab {

namespace {

nlohmann::ordered_json value_to_json(const ComplexityValue& v) {
    nlohmann::ordered_json j;
    j["censored"] = v.censored();
    j["search_cap"] = v.search_cap;
    if (!v.censored()) {
        j["value"] = *v.value;
        if (v.witness) {
            j["witness_hex"] = v.witness->to_hex();
            j["witness_bits"] = v.witness->size();
        }
    }
    return j;
}

}  // namespace

bool ComplexityReport::all_censored() const {
    bool censored = c.censored() && cd.censored() && ic.censored();
    if (qc) censored = censored && qc->censored();
    if (qcd) censored = censored && qcd->censored();
    if (qic) censored = censored && qic->censored();
    return censored;
}

std::string report_to_json(const ComplexityReport& report) {
    nlohmann::ordered_json j;
    j["instance_hex"] = report.instance.to_hex();
    j["n"] = report.instance.size();
    j["language"] = report.language;
    j["universe"] = report.universe.to_string();
    j["budgets"]["step_budget"] = report.step_budget;
    j["budgets"]["max_program_len"] = report.max_program_len;
    j["c"] = value_to_json(report.c);
    j["cd"] = value_to_json(report.cd);
    j["ic"] = value_to_json(report.ic);
    if (report.epsilon) j["epsilon"] = *report.epsilon;
    if (report.qc) j["qc"] = value_to_json(*report.qc);
    if (report.qcd) j["qcd"] = value_to_json(*report.qcd);
    if (report.qic) j["qic"] = value_to_json(*report.qic);
    return j.dump(2) + "\n";
}

}  // namespace queasylab
