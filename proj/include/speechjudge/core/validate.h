#pragma once

#include <span>
#include <string>
#include <vector>

#include "speechjudge/core/record.h"

namespace speechjudge {

/// Lists every invariant the record breaks; empty means well-formed.
std::vector<std::string> validate_record(
    const PreferenceRecord& record,
    std::span<const std::string> voice_roster = {});

}  // namespace speechjudge
