// Writes the stock Harnack documents used in the README examples.
#include <fstream>
#include <iostream>

#include "dimer/harnack/data.hpp"
#include "fixtures.hpp"

using namespace dimer::harnack;

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : ".";
    auto hex_bubbles = uniform_hexagon_ramified();
    hex_bubbles.circles = {{dimer::cplx(0.45, 0.15), 0.12}, {dimer::cplx(-0.45, -0.15), 0.12}};
    const std::pair<const char*, HarnackData> docs[] = {
        {"square_uniform", uniform_square(1)},
        {"square_n2", fixtures::square_n2()},
        {"square_genus1", fixtures::square_genus1()},
        {"hexagon_uniform", uniform_hexagon_ramified()},
        {"hexagon_two_bubbles", hex_bubbles},
        {"hexagon_unramified", symmetric_hexagon_unramified()},
    };
    for (const auto& [name, S] : docs) {
        std::string path = dir + "/" + name + ".json";
        std::ofstream(path) << to_json(S).dump(2) << "\n";
        std::cout << path << "\n";
    }
}
