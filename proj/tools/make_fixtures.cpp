// Writes the sample logs under data/ from the deterministic generators.

#include <fstream>
#include <iostream>
#include <string>

#include "ppmchart/fixtures.hpp"
#include "ppmchart/log_io.hpp"

namespace {

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  std::cout << "wrote " << path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  using namespace ppmchart;
  write(dir + "/chain.xes", write_log(fixtures::chain_log(), LogFormat::Xes));
  write(dir + "/chain.csv", write_log(fixtures::chain_log(), LogFormat::Csv));
  write(dir + "/preflight.xes",
        write_log(fixtures::generate_session(fixtures::preflight_shape()).log, LogFormat::Xes));
  write(dir + "/mortgage.xes",
        write_log(fixtures::generate_session(fixtures::mortgage_shape()).log, LogFormat::Xes));
  return 0;
}
