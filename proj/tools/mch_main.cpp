#include <iostream>

#include "mch/cli.hpp"

int main( int argc, char** argv )
{
  return mch::cli_run( argc, argv, std::cout, std::cerr );
}
