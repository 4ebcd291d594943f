// Regenerates scenarios/*.json from the builtin definitions so the shipped
// files can never drift from what the binary evaluates.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fdisac/harness.hpp"

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "scenarios";
    std::filesystem::create_directories(dir);
    for (const auto& [name, text] : fdisac::builtin_scenarios()) {
        const std::string path = dir + "/" + name + ".json";
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot write " << path << '\n';
            return 1;
        }
        out << text << '\n';
        std::cout << path << '\n';
    }
    return 0;
}
