#pragma once

#define LOGMAJ_VERSION "0.1.0"
