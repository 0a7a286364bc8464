#pragma once

#include <span>

namespace shagraph::fixtures {

struct Fixture {
    const char* name;
    const char* command;
    const char* note;
    const char* content;
};

std::span<const Fixture> all();

} // namespace shagraph::fixtures
