// Writes the built-in tubes A-E as JSON files, one per letter. Used to
// (re)generate data/tubes; the shipped files are its output.

#include <filesystem>
#include <iostream>

#include "tubeflow/canonical.hpp"
#include "tubeflow/tube_io.hpp"

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "data/tubes";
    std::filesystem::create_directories(dir);
    for (const auto& tube : tubeflow::canonical_tubes()) {
        auto file = dir / (tube.name() + ".json");
        tubeflow::save_tube(tube, file);
        std::cout << "wrote " << file.string() << "\n";
    }
    return 0;
}
