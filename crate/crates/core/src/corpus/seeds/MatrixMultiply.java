import java.util.Scanner;

public class MatrixMultiply {
    public static void main(String[] args) {
        Scanner sc = new Scanner(System.in);
        int rows = sc.nextInt();
        int inner = sc.nextInt();
        int cols = sc.nextInt();
        double[][] left = read(sc, rows, inner);
        double[][] right = read(sc, inner, cols);
        double[][] product = new double[rows][cols];
        for (int i = 0; i < rows; i++) {
            for (int j = 0; j < cols; j++) {
                double sum = 0.0;
                for (int k = 0; k < inner; k++) {
                    sum += left[i][k] * right[k][j];
                }
                product[i][j] = sum;
            }
        }
        print(product);
    }

    static double[][] read(Scanner sc, int r, int c) {
        double[][] m = new double[r][c];
        for (int i = 0; i < r; i++) {
            for (int j = 0; j < c; j++) {
                m[i][j] = sc.nextDouble();
            }
        }
        return m;
    }

    static void print(double[][] m) {
        for (double[] row : m) {
            StringBuilder line = new StringBuilder();
            for (int j = 0; j < row.length; j++) {
                if (j > 0) {
                    line.append(' ');
                }
                line.append(String.format("%.2f", row[j]));
            }
            System.out.println(line.toString());
        }
    }
}
