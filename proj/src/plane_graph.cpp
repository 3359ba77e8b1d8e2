namespace goeritz {}
