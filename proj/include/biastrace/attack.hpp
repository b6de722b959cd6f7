#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biastrace {

// Tactic order is the canonical output order everywhere.
enum class Tactic {
    Reconnaissance,
    Discovery,
    InitialAccess,
    Execution,
    Persistence,
    PrivilegeEscalation,
    DefenseEvasion,
    CredentialAccess,
    LateralMovement,
    Collection,
    Exfiltration,
    CommandAndControl,
    Impact,
    Unknown,
};

inline constexpr int kTacticCount = 14;

std::string_view tactic_name(Tactic t);
std::optional<Tactic> tactic_from_name(std::string_view name);

enum class ActionStyle { Aggressive, Stealthy, Unknown };
std::string_view style_name(ActionStyle s);
std::optional<ActionStyle> style_from_name(std::string_view name);

enum class Outcome { Success, Failure, Unknown };
std::string_view outcome_name(Outcome o);
std::optional<Outcome> outcome_from_name(std::string_view name);

struct TechniqueInfo {
    std::string id;
    std::string name;
    Tactic tactic = Tactic::Unknown;
    ActionStyle default_style = ActionStyle::Unknown;
    double default_complexity = 0.5;
};

// "T1046", "T1059.001", or the "T0000" unmapped sentinel.
bool is_valid_technique_id(std::string_view id);

// Bundled technique catalog. Sub-technique ids fall back to their parent
// entry when not listed explicitly.
const std::vector<TechniqueInfo>& technique_catalog();
const TechniqueInfo* lookup_technique(std::string_view id);

// Tactic for a technique id; Unknown if the id is not cataloged.
Tactic tactic_for_technique(std::string_view id);

} // namespace biastrace
