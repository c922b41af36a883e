#pragma once

#include <string>
#include <vector>

#include "pwl/domains.hpp"
#include "pwl/extended.hpp"
#include "pwl/multiagent.hpp"
#include "pwl/plan.hpp"
#include "pwl/reductions.hpp"
#include "pwl/system.hpp"
#include "pwl/verifier.hpp"

namespace pwl {

// All loaders throw ParseError on malformed text or missing/mistyped
// fields and ValidationError when the parsed value violates an invariant
// (the message names the first violation).  All serializers emit JSON with
// alphabetically ordered keys, so identical values give identical bytes.

std::string read_text_file(const std::string &path);          // throws ParseError
void write_text_file(const std::string &path, const std::string &text);

PwlSystem load_system(const std::string &text);
std::string system_to_json(const PwlSystem &sys);

// Plans name states and actions, so resolution takes explicit name tables;
// the same file format serves basic, extended, and per-agent plans.
PlanTable load_plan(const std::vector<std::string> &state_names, const std::vector<std::string> &action_names,
                    const std::string &text);
std::string plan_to_json(const std::vector<std::string> &state_names,
                         const std::vector<std::string> &action_names, const PlanTable &p);

ExtendedSystem load_extended(const std::string &text);
std::string extended_to_json(const ExtendedSystem &es);

MultiAgentSystem load_ma(const std::string &text);
std::string ma_to_json(const MultiAgentSystem &ms);
MultiAgentPlan load_ma_plan(const MultiAgentSystem &ms, const std::string &text);
std::string ma_plan_to_json(const MultiAgentSystem &ms, const MultiAgentPlan &mp);

Cnf3 load_dimacs(const std::string &text);
std::string dimacs_from_cnf(const Cnf3 &phi);

TransportGraph load_transport_graph(const std::string &text);

std::string trace_to_json(const std::vector<std::string> &state_names,
                          const std::vector<std::string> &action_names, const std::string &behavior_label,
                          const Trace &t);
std::string verdict_to_json(const PwlSystem &sys, const Verdict &v);
// Extended verdicts hold one trace per initial candidate.
std::string ext_verdict_to_json(const ExtendedSystem &es, const Verdict &v);
std::string ma_verdict_to_json(const MaVerdict &v);

// Accepts "101" or "1,0,1".
Assignment parse_assignment(const std::string &text);
std::string assignment_to_json(const Assignment &s);

enum class SystemKind { Basic, Extended, MultiAgent };
// Distinguishes the three system file formats by their table field.
SystemKind detect_system_kind(const std::string &text);

}  // namespace pwl
