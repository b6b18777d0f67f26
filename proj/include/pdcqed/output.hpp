#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdcqed/observables.hpp"
#include "pdcqed/scenarios.hpp"
#include "pdcqed/units.hpp"

namespace pdc {

// Columns: time_ps, n1..n3, Pk_a (k photons in mode a), Q1..Q3, g2_12, g2_13,
// g2_23, gamma_1..gamma_3, gamma_matter, H1..H3 (meV), method. Undefined
// samples and absent modes are empty cells.
std::vector<std::string> series_csv_header();
void write_series_csv(std::ostream& os, const std::vector<const ObservableSeries*>& series,
                      const UnitSystem& u = default_units(), bool header = true);
void write_series_csv(const std::string& path, const std::vector<const ObservableSeries*>& series,
                      const UnitSystem& u = default_units());

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, SweepParameter p);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, SweepParameter p);
void write_coupling_csv(std::ostream& os, const std::vector<CouplingRow>& rows);
void write_coupling_csv(const std::string& path, const std::vector<CouplingRow>& rows);
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace pdc
