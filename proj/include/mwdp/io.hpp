#pragma once

#include <iosfwd>
#include <string>

#include "mwdp/encoders.hpp"
#include "mwdp/instance.hpp"
#include "mwdp/mwum.hpp"
#include "mwdp/solver.hpp"

namespace mwdp {

// JSON documents carry a `schema` marker ("dp-instance/1", "tsp/1", "msc/1",
// "dp-report/1"). Readers reject unknown fields and wrong markers
// (input_error(schema_error)); writers emit keys in a fixed order so equal
// inputs serialize byte-identically.

DpInstance load_instance_json(const std::string& text);
DpInstance load_instance_file(const std::string& path);
std::string save_instance_json(const DpInstance& inst);
void save_instance_file(const DpInstance& inst, const std::string& path);

TspGraph load_tsp_json(const std::string& text);
TspGraph load_tsp_file(const std::string& path);
std::string save_tsp_json(const TspGraph& g);

MscInstance load_msc_json(const std::string& text);
MscInstance load_msc_file(const std::string& path);
std::string save_msc_json(const MscInstance& in);

std::string report_json(const SolveReport& rep);

/// One JSON object per line, one line per recorded round.
void write_transcript_jsonl(const FeasibilityTranscript& tr, std::ostream& os);

} // namespace mwdp
