# Fueter mapping package
