from nvreadout.main import main

main()
