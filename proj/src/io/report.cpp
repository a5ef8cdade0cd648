#include "kasar/io/report.hpp"

#include <iomanip>
#include <sstream>

namespace kasar::io {

using nlohmann::json;

json to_json(const pipeline::PipelineReport& r) {
    json stages = json::array();
    for (const auto& s : r.stages) {
        stages.push_back({{"name", s.name},
                          {"pass", s.pass},
                          {"profile", s.profile},
                          {"surface_peak_to_peak", s.surface_peak_to_peak},
                          {"surface_rms", s.surface_rms},
                          {"masked_cells", s.masked_cells},
                          {"entropy_before", s.entropy_before},
                          {"entropy_after", s.entropy_after},
                          {"residual_rcm_cells", s.residual_rcm_cells},
                          {"runtime_s", s.runtime_s},
                          {"applied", s.applied},
                          {"low_confidence", s.low_confidence},
                          {"note", s.note}});
    }
    return {{"mode", pipeline::to_string(r.mode)},
            {"entropy_input", r.entropy_input},
            {"entropy_final", r.entropy_final},
            {"runtime_s", r.runtime_s},
            {"stages", stages}};
}

json to_json(const FocusMetrics& m) {
    json targets = json::array();
    for (const auto& t : m.targets)
        targets.push_back({{"row", t.row},
                           {"col", t.col},
                           {"irw_azimuth_m", t.irw_azimuth_m},
                           {"irw_range_m", t.irw_range_m},
                           {"pslr_azimuth_db", t.pslr_azimuth_db},
                           {"pslr_range_db", t.pslr_range_db}});
    json j = {{"entropy", m.entropy},
              {"contrast", m.contrast},
              {"mean_irw_azimuth_m", m.mean_irw_azimuth_m},
              {"mean_irw_range_m", m.mean_irw_range_m},
              {"mean_pslr_azimuth_db", m.mean_pslr_azimuth_db},
              {"mean_pslr_range_db", m.mean_pslr_range_db},
              {"targets", targets}};
    j["residual_rcm_cells"] = m.residual_rcm_cells ? json(*m.residual_rcm_cells) : json(nullptr);
    return j;
}

json to_json(const structure::LimitReport& r) {
    return {{"rho_x", r.rho_x}, {"rho_y", r.rho_y}, {"y0", r.y0},
            {"a_ape", r.a_ape}, {"a_rcm", r.a_rcm}, {"a_defocus", r.a_defocus}};
}

std::string region_table(double y0, const std::vector<double>& rhos, const std::vector<double>& coeffs) {
    std::ostringstream os;
    os << std::setw(10) << "rho \\ a";
    for (double a : coeffs) os << std::setw(14) << a;
    os << '\n';
    for (double rho : rhos) {
        const auto lim = structure::necessity_limits(rho, rho, y0);
        os << std::setw(10) << rho;
        for (double a : coeffs) os << std::setw(14) << structure::to_string(lim.classify(a));
        os << '\n';
    }
    return os.str();
}

}  // namespace kasar::io
