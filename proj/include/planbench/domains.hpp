#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "planbench/pddl.hpp"

namespace planbench {

enum class DomainId { blocksworld, logistics, grid };

inline constexpr std::array<DomainId, 3> kAllDomains{DomainId::blocksworld, DomainId::logistics, DomainId::grid};

// PDDL domain name: "blocksworld-4ops", "logistics-strips" or "grid".
std::string_view domain_name(DomainId id);
// Short benchmark key used in record ids and the CLI: "bw", "logistics", "minigrid".
std::string_view domain_key(DomainId id);
// Accepts either the PDDL name or the short key.
std::optional<DomainId> domain_from_name(std::string_view name);

// The embedded STRIPS domain. The returned reference is a process-wide constant.
const Domain& builtin_domain(DomainId id);

// Domain PDDL source for use with external planners and validators.
std::string builtin_domain_pddl(DomainId id);

}  // namespace planbench
