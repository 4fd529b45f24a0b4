#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rorlicz/closure_diagnostics.hpp"
#include "rorlicz/domination.hpp"
#include "rorlicz/duality.hpp"
#include "rorlicz/io.hpp"
#include "rorlicz/norm_engine.hpp"
#include "rorlicz/option_spanning.hpp"
#include "rorlicz/preference_aggregation.hpp"

namespace rorlicz {

/// 12 significant digits; infinities as "inf" / "-inf".
std::string format_number(double v);

/// JSON with every float printed through format_number; non-finite floats
/// become the strings "inf", "-inf", "nan".
std::string dump_json(const Json& j, int indent = 2);

/// One "path: value" line per leaf; arrays of scalars on one line.
std::string dump_text(const Json& j);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
std::string dump_csv(const CsvTable& t);

Json vector_json(const std::vector<double>& v);
Json labelled_measure_json(const MeasureVector& m, const std::vector<std::string>& atoms);

Json to_json(const NormResult& r, const ScenarioModel& model);
Json to_json(const KotheResult& r);
Json to_json(const DualWitness& w, const ScenarioModel& model);
Json to_json(const L1Report& r);
Json to_json(const DominationReport& r, const ScenarioModel& model);
Json to_json(const UiProfile& r, const ScenarioModel& model);
Json to_json(const TailProfile& r);
Json to_json(const MomentReport& r);
Json to_json(const MembershipReport& r);
Json to_json(const MixtureWitness& r);
Json to_json(const OptionBasis& b);
Json to_json(const Projection& p);
Json to_json(const SpanningReport& r);
Json to_json(const ExtensionReport& r);

CsvTable tail_csv(const TailProfile& r);
CsvTable moment_csv(const MomentReport& r);
CsvTable ui_csv(const UiProfile& r);
CsvTable membership_csv(const MembershipReport& r);

} // namespace rorlicz
