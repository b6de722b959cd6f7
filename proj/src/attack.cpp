#include "biastrace/attack.hpp"

#include <algorithm>
#include <map>

namespace biastrace {

namespace {

struct TacticName {
    Tactic tactic;
    std::string_view name;
};

constexpr TacticName kTacticNames[] = {
    {Tactic::Reconnaissance, "Reconnaissance"},
    {Tactic::Discovery, "Discovery"},
    {Tactic::InitialAccess, "InitialAccess"},
    {Tactic::Execution, "Execution"},
    {Tactic::Persistence, "Persistence"},
    {Tactic::PrivilegeEscalation, "PrivilegeEscalation"},
    {Tactic::DefenseEvasion, "DefenseEvasion"},
    {Tactic::CredentialAccess, "CredentialAccess"},
    {Tactic::LateralMovement, "LateralMovement"},
    {Tactic::Collection, "Collection"},
    {Tactic::Exfiltration, "Exfiltration"},
    {Tactic::CommandAndControl, "CommandAndControl"},
    {Tactic::Impact, "Impact"},
    {Tactic::Unknown, "Unknown"},
};

} // namespace

std::string_view tactic_name(Tactic t) {
    for (const auto& tn : kTacticNames) {
        if (tn.tactic == t) return tn.name;
    }
    return "Unknown";
}

std::optional<Tactic> tactic_from_name(std::string_view name) {
    for (const auto& tn : kTacticNames) {
        if (tn.name == name) return tn.tactic;
    }
    return std::nullopt;
}

std::string_view style_name(ActionStyle s) {
    switch (s) {
        case ActionStyle::Aggressive: return "aggressive";
        case ActionStyle::Stealthy: return "stealthy";
        case ActionStyle::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<ActionStyle> style_from_name(std::string_view name) {
    if (name == "aggressive") return ActionStyle::Aggressive;
    if (name == "stealthy") return ActionStyle::Stealthy;
    if (name == "unknown") return ActionStyle::Unknown;
    return std::nullopt;
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Success: return "success";
        case Outcome::Failure: return "failure";
        case Outcome::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<Outcome> outcome_from_name(std::string_view name) {
    if (name == "success") return Outcome::Success;
    if (name == "failure") return Outcome::Failure;
    if (name == "unknown") return Outcome::Unknown;
    return std::nullopt;
}

bool is_valid_technique_id(std::string_view id) {
    if (id.size() != 5 && id.size() != 9) return false;
    if (id[0] != 'T') return false;
    for (std::size_t i = 1; i < 5; ++i) {
        if (id[i] < '0' || id[i] > '9') return false;
    }
    if (id.size() == 9) {
        if (id[5] != '.') return false;
        for (std::size_t i = 6; i < 9; ++i) {
            if (id[i] < '0' || id[i] > '9') return false;
        }
    }
    return true;
}

const std::vector<TechniqueInfo>& technique_catalog() {
    static const std::vector<TechniqueInfo> catalog = {
        {"T0000", "Unmapped", Tactic::Unknown, ActionStyle::Unknown, 0.5},
        // Reconnaissance
        {"T1595", "Active Scanning", Tactic::Reconnaissance, ActionStyle::Aggressive, 0.2},
        {"T1592", "Gather Victim Host Information", Tactic::Reconnaissance, ActionStyle::Stealthy, 0.3},
        // Discovery
        {"T1007", "System Service Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1012", "Query Registry", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1016", "System Network Configuration Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1018", "Remote System Discovery", Tactic::Discovery, ActionStyle::Aggressive, 0.2},
        {"T1033", "System Owner/User Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1040", "Network Sniffing", Tactic::Discovery, ActionStyle::Stealthy, 0.4},
        {"T1046", "Network Service Discovery", Tactic::Discovery, ActionStyle::Aggressive, 0.2},
        {"T1049", "System Network Connections Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1057", "Process Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1069", "Permission Groups Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.2},
        {"T1082", "System Information Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1083", "File and Directory Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1087", "Account Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.2},
        {"T1120", "Peripheral Device Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.2},
        {"T1124", "System Time Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        {"T1135", "Network Share Discovery", Tactic::Discovery, ActionStyle::Aggressive, 0.2},
        {"T1201", "Password Policy Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.2},
        {"T1482", "Domain Trust Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.3},
        {"T1518", "Software Discovery", Tactic::Discovery, ActionStyle::Stealthy, 0.1},
        // Initial access
        {"T1190", "Exploit Public-Facing Application", Tactic::InitialAccess, ActionStyle::Aggressive, 0.7},
        {"T1133", "External Remote Services", Tactic::InitialAccess, ActionStyle::Stealthy, 0.5},
        {"T1566", "Phishing", Tactic::InitialAccess, ActionStyle::Stealthy, 0.6},
        // Execution
        {"T1059", "Command and Scripting Interpreter", Tactic::Execution, ActionStyle::Unknown, 0.3},
        {"T1106", "Native API", Tactic::Execution, ActionStyle::Stealthy, 0.6},
        {"T1203", "Exploitation for Client Execution", Tactic::Execution, ActionStyle::Aggressive, 0.7},
        {"T1072", "Software Deployment Tools", Tactic::Execution, ActionStyle::Stealthy, 0.6},
        // Persistence
        {"T1053", "Scheduled Task/Job", Tactic::Persistence, ActionStyle::Stealthy, 0.4},
        {"T1505", "Server Software Component", Tactic::Persistence, ActionStyle::Stealthy, 0.6},
        {"T1547", "Boot or Logon Autostart Execution", Tactic::Persistence, ActionStyle::Stealthy, 0.4},
        // Privilege escalation
        {"T1068", "Exploitation for Privilege Escalation", Tactic::PrivilegeEscalation, ActionStyle::Aggressive, 0.8},
        {"T1548", "Abuse Elevation Control Mechanism", Tactic::PrivilegeEscalation, ActionStyle::Stealthy, 0.5},
        // Defense evasion
        {"T1070", "Indicator Removal", Tactic::DefenseEvasion, ActionStyle::Stealthy, 0.4},
        {"T1078", "Valid Accounts", Tactic::DefenseEvasion, ActionStyle::Stealthy, 0.3},
        {"T1211", "Exploitation for Defense Evasion", Tactic::DefenseEvasion, ActionStyle::Aggressive, 0.8},
        // Credential access
        {"T1003", "OS Credential Dumping", Tactic::CredentialAccess, ActionStyle::Stealthy, 0.5},
        {"T1110", "Brute Force", Tactic::CredentialAccess, ActionStyle::Aggressive, 0.3},
        {"T1212", "Exploitation for Credential Access", Tactic::CredentialAccess, ActionStyle::Aggressive, 0.8},
        {"T1552", "Unsecured Credentials", Tactic::CredentialAccess, ActionStyle::Stealthy, 0.3},
        {"T1557", "Adversary-in-the-Middle", Tactic::CredentialAccess, ActionStyle::Stealthy, 0.6},
        // Lateral movement
        {"T1021", "Remote Services", Tactic::LateralMovement, ActionStyle::Stealthy, 0.3},
        {"T1210", "Exploitation of Remote Services", Tactic::LateralMovement, ActionStyle::Aggressive, 0.7},
        {"T1570", "Lateral Tool Transfer", Tactic::LateralMovement, ActionStyle::Stealthy, 0.4},
        // Collection
        {"T1005", "Data from Local System", Tactic::Collection, ActionStyle::Stealthy, 0.2},
        {"T1039", "Data from Network Shared Drive", Tactic::Collection, ActionStyle::Stealthy, 0.3},
        // Exfiltration
        {"T1041", "Exfiltration Over C2 Channel", Tactic::Exfiltration, ActionStyle::Stealthy, 0.5},
        {"T1048", "Exfiltration Over Alternative Protocol", Tactic::Exfiltration, ActionStyle::Aggressive, 0.5},
        // Command and control
        {"T1071", "Application Layer Protocol", Tactic::CommandAndControl, ActionStyle::Stealthy, 0.5},
        {"T1105", "Ingress Tool Transfer", Tactic::CommandAndControl, ActionStyle::Aggressive, 0.3},
        // Impact
        {"T1486", "Data Encrypted for Impact", Tactic::Impact, ActionStyle::Aggressive, 0.6},
        {"T1489", "Service Stop", Tactic::Impact, ActionStyle::Aggressive, 0.4},
    };
    return catalog;
}

const TechniqueInfo* lookup_technique(std::string_view id) {
    static const std::map<std::string, const TechniqueInfo*, std::less<>> index = [] {
        std::map<std::string, const TechniqueInfo*, std::less<>> m;
        for (const auto& t : technique_catalog()) m.emplace(t.id, &t);
        return m;
    }();
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    // Sub-technique falls back to its parent.
    if (id.size() == 9 && id[5] == '.') {
        it = index.find(id.substr(0, 5));
        if (it != index.end()) return it->second;
    }
    return nullptr;
}

Tactic tactic_for_technique(std::string_view id) {
    const TechniqueInfo* info = lookup_technique(id);
    return info ? info->tactic : Tactic::Unknown;
}

} // namespace biastrace
