#pragma once

#include "isaw/bisim.hpp"
#include "isaw/errors.hpp"
#include "isaw/lts.hpp"
#include "isaw/lts_io.hpp"
#include "isaw/pga.hpp"
#include "isaw/pgld.hpp"
#include "isaw/process_extract.hpp"
#include "isaw/services.hpp"
#include "isaw/synthesis.hpp"
#include "isaw/thread.hpp"
#include "isaw/thread_extract.hpp"
