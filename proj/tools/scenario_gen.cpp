// Regenerates the bundled scenario files from the in-code definitions.
// Usage: scenario_gen <output-dir>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "swarmpath/arena.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: scenario_gen <output-dir>\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    for (const auto& sc : swarmpath::builtin_environments()) {
        const auto path = dir / (sc.name + ".json");
        std::ofstream os(path, std::ios::binary);
        os << swarmpath::emit_scenario(sc);
        std::cout << path.string() << "\n";
    }
    return 0;
}
