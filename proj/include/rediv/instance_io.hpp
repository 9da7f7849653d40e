#pragma once

#include <string>

#include <json.hpp>

#include "rediv/completion.hpp"
#include "rediv/metrics.hpp"
#include "rediv/protocol.hpp"

namespace rediv {

using Json = nlohmann::json;

// Schema errors (bad JSON shape, bad rationals, invariant violations on
// load) are reported as SchemaError so the CLI can map them to exit code 2.
struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error(what) {}
};

Json piece_to_json(const PieceRegion& p);
PieceRegion piece_from_json(const Json& j);

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

Json allocation_to_json(const Instance& inst, const Allocation& alloc);
Allocation allocation_from_json(const Json& j);

Json report_to_json(const FairnessReport& rep);
Json completion_to_json(const CompletionResult& res);

void write_json(const Json& j, const std::string& path);
Json read_json(const std::string& path);

}  // namespace rediv
