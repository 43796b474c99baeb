// Writes a synthetic CSV with the credit-card column layout
// (Time, V1..V28, Amount, Class). Useful for smoke tests when the real file
// is not available. Not a substitute for it.

#include <iostream>

#include <CLI11.hpp>

#include "qfraud/dataset.hpp"
#include "qfraud/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic credit-card style CSV"};
  std::size_t legit = 20000, fraud = 492;
  std::uint64_t seed = 7;
  double shift = 1.0;
  std::string out;
  app.add_option("-o,--out", out, "Output CSV")->required();
  app.add_option("--legit", legit, "Legitimate rows");
  app.add_option("--fraud", fraud, "Fraud rows");
  app.add_option("--seed", seed);
  app.add_option("--shift", shift, "Scale of the fraud mean shift (0 makes classes identical)");
  CLI11_PARSE(app, argc, argv);

  try {
    qfraud::save_transactions(out, qfraud::synthetic_transactions(legit, fraud, seed, shift));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "wrote " << legit + fraud << " rows (" << fraud << " fraud) to " << out << "\n";
  return 0;
}
